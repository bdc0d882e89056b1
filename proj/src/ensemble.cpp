#include "qpatt/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpatt {

namespace {
constexpr double kEigenClampTol = 1e-10;
constexpr double kPriorSumTol = 1e-12;
constexpr double kUnitDiagTol = 1e-12;
} // namespace

Priors::Priors(Eigen::VectorXd probabilities) : probabilities_(std::move(probabilities)) {
    if (probabilities_.size() == 0)
        throw std::invalid_argument("Priors: empty");
    if ((probabilities_.array() < 0.0).any())
        throw std::invalid_argument("Priors: negative probability");
    if (std::abs(probabilities_.sum() - 1.0) > kPriorSumTol)
        throw std::invalid_argument("Priors: probabilities must sum to 1");
}

Priors Priors::uniform(int n) {
    if (n < 1)
        throw std::invalid_argument("Priors::uniform: n must be positive");
    return Priors(Eigen::VectorXd::Constant(n, 1.0 / n));
}

GramSpectrum::GramSpectrum(Eigen::MatrixXd gram) : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols() || gram_.rows() == 0)
        throw std::invalid_argument("GramSpectrum: square non-empty matrix required");
    for (Eigen::Index i = 0; i < gram_.rows(); ++i)
        if (std::abs(gram_(i, i) - 1.0) > kUnitDiagTol)
            throw std::invalid_argument("GramSpectrum: diagonal must be 1 (unit-norm states)");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram_);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("GramSpectrum: eigendecomposition failed");

    // Eigen returns ascending order; store descending.
    const Eigen::Index n = gram_.rows();
    eigenvalues_.resize(n);
    eigenvectors_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        eigenvalues_[i] = solver.eigenvalues()[n - 1 - i];
        eigenvectors_.col(i) = solver.eigenvectors().col(n - 1 - i);
    }

    if (eigenvalues_[n - 1] < -kEigenClampTol)
        throw std::invalid_argument("GramSpectrum: matrix is not positive semidefinite");
    // zero out everything below the clamp tolerance: sqrt() would otherwise
    // amplify O(eps) eigenvalue noise of singular matrices into O(1e-8)
    // entries of the square root
    eigenvalues_ = (eigenvalues_.array() < kEigenClampTol).select(0.0, eigenvalues_);

    sqrt_gram_ = eigenvectors_ * eigenvalues_.cwiseSqrt().asDiagonal() * eigenvectors_.transpose();
    sqrt_gram_ = 0.5 * (sqrt_gram_ + sqrt_gram_.transpose().eval()); // kill round-off asymmetry
}

double pattern_overlap(const Pattern& a, const Pattern& b, const Modulation& mod,
                       const ChannelParams& channel) {
    if (a.modes() != b.modes())
        throw std::invalid_argument("pattern_overlap: pattern lengths differ");
    double sq_dist = 0.0;
    for (int j = 0; j < a.modes(); ++j) {
        const double d = amplitude(a, j, mod, channel) - amplitude(b, j, mod, channel);
        sq_dist += d * d;
    }
    return std::exp(-0.5 * sq_dist);
}

GramSpectrum gram(const ImageSpace& space, const ChannelParams& channel) {
    const int n = space.size();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
        g(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double v =
                pattern_overlap(space.pattern(i), space.pattern(j), space.modulation(), channel);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return GramSpectrum(std::move(g));
}

Eigen::MatrixXd pgm_conditional(const GramSpectrum& spectrum) {
    return spectrum.sqrt_gram().array().square().matrix();
}

double pgm_error(const ImageSpace& space, const ChannelParams& channel) {
    const GramSpectrum spectrum = gram(space, channel);
    const int n = spectrum.size();
    const double mean_sqrt = spectrum.eigenvalues().cwiseSqrt().sum() / n;
    const double err = 1.0 - mean_sqrt * mean_sqrt;
    return std::clamp(err, 0.0, 1.0 - 1.0 / n);
}

double entropy_bits(const Eigen::VectorXd& values) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double p = values[i];
        if (p > 0.0)
            h -= p * std::log2(p);
    }
    return h;
}

double mixture_entropy(const Eigen::MatrixXd& gram_matrix, const Priors& priors) {
    if (gram_matrix.rows() != priors.size())
        throw std::invalid_argument("mixture_entropy: priors length must match ensemble size");
    const Eigen::VectorXd root = priors.probabilities().cwiseSqrt();
    const Eigen::MatrixXd weighted =
        root.asDiagonal() * gram_matrix * root.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(weighted);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("mixture_entropy: eigendecomposition failed");
    return entropy_bits(solver.eigenvalues().cwiseMax(0.0));
}

double mixture_entropy(const ImageSpace& space, const Priors& priors,
                       const ChannelParams& channel) {
    return mixture_entropy(gram(space, channel).gram(), priors);
}

double holevo(const ImageSpace& space, const Priors& priors, const ChannelParams& channel) {
    // chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i); the second term is zero
    // for pure states, and a pure-loss channel preserves purity.
    return mixture_entropy(space, priors, channel);
}

} // namespace qpatt
