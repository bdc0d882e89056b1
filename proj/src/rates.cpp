#include "qpatt/rates.hpp"

#include <cstdio>
#include <stdexcept>

#include "qpatt/ensemble.hpp"
#include "qpatt/parallel.hpp"

namespace qpatt {

RatePoint assemble(double eta, double ns, std::optional<double> i_ab,
                   std::optional<double> i_ae, std::optional<double> chi_ae,
                   std::optional<double> p_dec, std::optional<double> i_ae_dim,
                   std::optional<double> i_ae_pr) {
    if (p_dec && !(*p_dec >= 0.0 && *p_dec <= 1.0))
        throw std::invalid_argument("assemble: p_dec must lie in [0, 1]");

    RatePoint point;
    point.eta = eta;
    point.ns = ns;
    point.i_ab = i_ab;
    point.i_ae = i_ae;
    point.chi_ae = chi_ae;
    point.p_dec = p_dec;
    point.i_ae_dim = i_ae_dim;
    if (i_ab && chi_ae)
        point.r_coll = *i_ab - *chi_ae;
    if (i_ab && i_ae)
        point.r_ind = *i_ab - *i_ae;
    if (i_ab && i_ae_dim)
        point.r_dim = *i_ab - *i_ae_dim;
    if (i_ab && p_dec && i_ae_pr)
        point.r_pr = *i_ab - *p_dec * *i_ae_pr;
    return point;
}

RatePoint ltpf_rate_point(const LtpfScheme& scheme, double eta) {
    const double i_ab = mutual_info_ab(scheme, eta);
    const double i_ae = mutual_info_ab(scheme, 1.0 - eta);
    const ImageSpace space = build_image_space(scheme);
    const double chi =
        holevo(space, Priors::uniform(space.size()), ChannelParams(eta, ChannelSide::Eve));
    const double p_dec = k_inference_prob(scheme, eta);
    const double i_ae_pr = mutual_info_ae_unbiased(scheme, eta);
    // one-to-one encoding: the diminished attack collapses onto the
    // individual one
    return assemble(eta, scheme.modulation().mean_photons, i_ab, i_ae, chi, p_dec, i_ae,
                    i_ae_pr);
}

std::vector<RatePoint> sweep(const std::function<RatePoint(double eta, double ns)>& evaluate,
                             const std::vector<double>& etas, const std::vector<double>& ns_list,
                             int threads) {
    if (etas.empty() || ns_list.empty())
        throw std::invalid_argument("sweep: empty grid");
    for (double eta : etas)
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::invalid_argument("sweep: eta values must lie in [0, 1]");

    const int total = static_cast<int>(etas.size() * ns_list.size());
    std::vector<RatePoint> points(static_cast<std::size_t>(total));
    parallel_for(total, threads, [&](int i) {
        const std::size_t ei = static_cast<std::size_t>(i) / ns_list.size();
        const std::size_t ni = static_cast<std::size_t>(i) % ns_list.size();
        points[static_cast<std::size_t>(i)] = evaluate(etas[ei], ns_list[ni]);
    });
    return points;
}

std::vector<double> parse_grid(const std::string& text) {
    const std::size_t c1 = text.find(':');
    if (c1 == std::string::npos)
        return {std::stod(text)};
    const std::size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("grid: expected 'start:stop:count' or a single value");
    const double start = std::stod(text.substr(0, c1));
    const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const int count = std::stoi(text.substr(c2 + 1));
    if (count < 1)
        throw std::invalid_argument("grid: count must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    for (int i = 0; i < count; ++i)
        out.push_back(start + (stop - start) * i / (count - 1));
    return out;
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

std::string rates_to_csv(const std::vector<RatePoint>& points) {
    std::string out = "eta,ns,i_ab,i_ae,chi_ae,p_dec,r_coll,r_ind,r_dim,r_pr\n";
    const auto cell = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string{};
    };
    for (const auto& p : points) {
        out += format_double(p.eta);
        out += ',';
        out += format_double(p.ns);
        for (const auto* v : {&p.i_ab, &p.i_ae, &p.chi_ae, &p.p_dec, &p.r_coll, &p.r_ind,
                              &p.r_dim, &p.r_pr}) {
            out += ',';
            out += cell(*v);
        }
        out += '\n';
    }
    return out;
}

} // namespace qpatt
