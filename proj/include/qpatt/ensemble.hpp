// Pure-state ensemble numerics: coherent overlaps, Gram matrices with their
// spectra and square roots, square-root-measurement statistics, mixture
// entropy and Holevo information.
#pragma once

#include <Eigen/Dense>

#include "qpatt/pattern.hpp"

namespace qpatt {

// Prior distribution over an N-state ensemble. Entries are non-negative and
// sum to 1 within 1e-12.
class Priors {
  public:
    explicit Priors(Eigen::VectorXd probabilities);
    static Priors uniform(int n);

    int size() const { return static_cast<int>(probabilities_.size()); }
    double operator[](int i) const { return probabilities_[i]; }
    const Eigen::VectorXd& probabilities() const { return probabilities_; }

  private:
    Eigen::VectorXd probabilities_;
};

// Hermitian overlap matrix of a lossy pure-state ensemble, together with its
// eigendecomposition and principal square root. Immutable once built.
//
// Invariants enforced at construction: unit diagonal; eigenvalues above
// -1e-10 (tiny negative values are clamped to zero, which makes the square
// root a pseudo-square-root on the support when the matrix is singular).
class GramSpectrum {
  public:
    explicit GramSpectrum(Eigen::MatrixXd gram);

    int size() const { return static_cast<int>(gram_.rows()); }
    const Eigen::MatrixXd& gram() const { return gram_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; } // descending
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    const Eigen::MatrixXd& sqrt_gram() const { return sqrt_gram_; }

  private:
    Eigen::MatrixXd gram_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::MatrixXd sqrt_gram_;
};

// <a|b> after the channel: product over modes of real-amplitude coherent
// overlaps exp(-(alpha-beta)^2/2). Equals 1 exactly when a == b.
double pattern_overlap(const Pattern& a, const Pattern& b, const Modulation& mod,
                       const ChannelParams& channel);

// Gram matrix of the lossy ensemble generated by the space, indexed in the
// space's stored order.
GramSpectrum gram(const ImageSpace& space, const ChannelParams& channel);

// Square-root-measurement outcome probabilities: entry (i, j) is the
// probability of outcome j given state i, i.e. the squared (i, j) entry of
// sqrt(G). Rows sum to 1 because the diagonal of G is 1.
Eigen::MatrixXd pgm_conditional(const GramSpectrum& spectrum);

// Average discrimination error of the equiprobable ensemble under the
// square-root measurement: 1 - ((1/N) sum_i sqrt(lambda_i))^2 with lambda
// the Gram eigenvalues, clamped to [0, 1 - 1/N].
double pgm_error(const ImageSpace& space, const ChannelParams& channel);

// Von Neumann entropy (bits) of the prior-weighted mixture. The nonzero
// eigenvalues of a pure-state mixture equal those of D^{1/2} G D^{1/2} with
// D = diag(priors), so only the Gram matrix is needed.
double mixture_entropy(const Eigen::MatrixXd& gram_matrix, const Priors& priors);
double mixture_entropy(const ImageSpace& space, const Priors& priors,
                       const ChannelParams& channel);

// Holevo information (bits) of the lossy ensemble. Pure loss keeps the
// states pure, so the average-state entropy is the whole bound.
double holevo(const ImageSpace& space, const Priors& priors, const ChannelParams& channel);

// Shannon entropy in bits of a non-negative vector summing to ~1;
// 0*log(0) == 0 and small negative eigenvalue noise is clamped.
double entropy_bits(const Eigen::VectorXd& values);

} // namespace qpatt
