// Security-hierarchy assembly: composes mutual informations, Holevo bounds
// and inference probabilities into the four rate tiers, sweeps grids, and
// serializes the results.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpatt/ltpf.hpp"

namespace qpatt {

// One grid point. Tiers are populated as their inputs are available;
// negative rates are reported as-is ("secure" means > 0).
struct RatePoint {
    double eta = 0.0;
    double ns = 0.0;
    std::optional<double> i_ab;
    std::optional<double> i_ae;     // interceptor MI under the strongest computed attack model
    std::optional<double> chi_ae;   // Holevo bound on the interceptor arm
    std::optional<double> p_dec;    // scheme-inference success probability
    std::optional<double> i_ae_dim; // interceptor MI with diminished resources
    std::optional<double> r_coll;
    std::optional<double> r_ind;
    std::optional<double> r_dim;
    std::optional<double> r_pr;
};

// r_coll = i_ab - chi_ae; r_ind = i_ab - i_ae; r_dim = i_ab - i_ae_dim;
// r_pr = i_ab - p_dec * i_ae_pr (the caller supplies the unbiased-attack MI
// for the probabilistic tier). Missing inputs leave tiers unset.
RatePoint assemble(double eta, double ns, std::optional<double> i_ab,
                   std::optional<double> i_ae, std::optional<double> chi_ae,
                   std::optional<double> p_dec, std::optional<double> i_ae_dim,
                   std::optional<double> i_ae_pr = std::nullopt);

// Full evaluation of one LTPF grid point: all tiers, with r_dim = r_ind
// (one-to-one encoding has nothing to diminish).
RatePoint ltpf_rate_point(const LtpfScheme& scheme, double eta);

// One RatePoint per (eta, ns) pair, row-major over eta then ns, evaluated
// in parallel with deterministic output order.
std::vector<RatePoint> sweep(const std::function<RatePoint(double eta, double ns)>& evaluate,
                             const std::vector<double>& etas, const std::vector<double>& ns_list,
                             int threads = 0);

// "start:stop:count" or a single value
std::vector<double> parse_grid(const std::string& text);

// Fixed-schema CSV: eta,ns,i_ab,i_ae,chi_ae,p_dec,r_coll,r_ind,r_dim,r_pr
// with empty cells for unset tiers. Deterministic formatting.
std::string rates_to_csv(const std::vector<RatePoint>& points);

std::string format_double(double v);

} // namespace qpatt
