#include "hrlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hrlab/svd.hpp"

namespace hrlab {

namespace {

struct KdeProfile {
    std::vector<double> grid;
    std::vector<double> density;
    double peak = 0.0;
    double peak_x = 0.0;
};

KdeProfile kde_profile(const std::vector<double>& activations, Rng& rng,
                       const KdeOptions& opts) {
    const std::size_t n = activations.size();
    check(n >= 2, "kde: need at least 2 activations");
    const double sigma = std::sqrt(opts.jitter_sigma2);
    std::vector<double> jittered(n);
    for (std::size_t i = 0; i < n; ++i)
        jittered[i] = activations[i] + (sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0);

    double mean = 0.0;
    for (double v : jittered) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : jittered) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double std_j = std::sqrt(var);
    const double bw = std::pow(static_cast<double>(n), -0.2) * std_j;

    KdeProfile prof;
    if (bw <= 0.0) {
        // Degenerate sample: the density is a spike; treat the peak as infinite.
        prof.peak = std::numeric_limits<double>::infinity();
        prof.peak_x = jittered[0];
        return prof;
    }

    const auto [mn_it, mx_it] = std::minmax_element(jittered.begin(), jittered.end());
    const double lo = *mn_it - 3.0 * bw;
    const double hi = *mx_it + 3.0 * bw;
    const std::size_t g = opts.grid_points;
    prof.grid.resize(g);
    prof.density.resize(g);
    const double norm = 1.0 / (static_cast<double>(n) * bw * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t k = 0; k < g; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(g - 1);
        double f = 0.0;
        for (double aj : jittered) {
            const double t = (x - aj) / bw;
            f += std::exp(-0.5 * t * t);
        }
        f *= norm;
        prof.grid[k] = x;
        prof.density[k] = f;
        if (f > prof.peak) {
            prof.peak = f;
            prof.peak_x = x;
        }
    }
    return prof;
}

}  // namespace

double kde_peak_density(const std::vector<double>& activations, Rng& rng,
                        const KdeOptions& opts) {
    return kde_profile(activations, rng, opts).peak;
}

std::vector<std::size_t> DormancyReport::dormant_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < neurons.size(); ++i)
        if (neurons[i].dormant) idx.push_back(i);
    return idx;
}

DormancyReport classify_dormant(const Matrix& features, Activation act, Rng& rng,
                                const DormancyOptions& opts) {
    check(features.rows() >= 2, "classify_dormant: need at least 2 observations");
    check(features.all_finite(), "classify_dormant: non-finite features");
    DormancyReport report;
    report.neurons.resize(features.cols());
    std::size_t dormant_count = 0;
    std::vector<double> column(features.rows());
    for (std::size_t j = 0; j < features.cols(); ++j) {
        double mean = 0.0;
        bool all_zero = true;
        for (std::size_t i = 0; i < features.rows(); ++i) {
            column[i] = features(i, j);
            mean += column[i];
            if (column[i] != 0.0) all_zero = false;
        }
        mean /= static_cast<double>(features.rows());

        NeuronDormancy& nd = report.neurons[j];
        KdeProfile prof = kde_profile(column, rng, opts.kde);
        nd.peak_density = prof.peak;
        nd.dormant = prof.peak >= opts.omega;
        if (act == Activation::Relu && all_zero) nd.dormant = true;

        if (nd.dormant) {
            if (act == Activation::Relu) {
                nd.omega_hat = 0.0;
            } else {
                nd.omega_hat = mean >= 0.0 ? 1.0 : -1.0;
                // Bimodal check: a second peak on the opposite sign side.
                double neg_peak = 0.0, pos_peak = 0.0;
                for (std::size_t k = 0; k < prof.grid.size(); ++k)
                    (prof.grid[k] < 0.0 ? neg_peak : pos_peak) =
                        std::max(prof.grid[k] < 0.0 ? neg_peak : pos_peak,
                                 prof.density[k]);
                if (neg_peak >= opts.omega && pos_peak >= opts.omega) {
                    nd.bimodal = true;
                    nd.omega_hat = pos_peak >= neg_peak ? 1.0 : -1.0;
                }
            }
            ++dormant_count;
        }
    }
    report.fraction =
        static_cast<double>(dormant_count) / static_cast<double>(features.cols());
    return report;
}

std::size_t effective_rank_from_singular_values(const std::vector<double>& sv,
                                                double delta) {
    check(!sv.empty(), "effective_rank: empty spectrum");
    double total = 0.0;
    for (double s : sv) total += s;
    const double threshold = (1.0 - delta) * total;
    double cumsum = 0.0;
    std::size_t crossed = 0;
    for (double s : sv) {
        cumsum += s;
        if (cumsum >= threshold) ++crossed;
    }
    return sv.size() - crossed + 1;
}

std::size_t effective_rank(const Matrix& phi, double delta, bool& degenerate) {
    const std::vector<double> sv = singular_values(phi);
    degenerate = sv.front() == 0.0;
    return effective_rank_from_singular_values(sv, delta);
}

std::size_t effective_rank(const Matrix& phi, double delta) {
    bool degenerate = false;
    return effective_rank(phi, delta, degenerate);
}

BiasDecomposition bias_decomposition(const Matrix& a_next, const Matrix& b_next,
                                     const std::vector<double>& z,
                                     const std::vector<std::size_t>& dormant_set,
                                     const std::vector<double>& omega_hat) {
    check(a_next.cols() == z.size(), "bias_decomposition: z length mismatch");
    check(b_next.rows() == 1 && b_next.cols() == a_next.rows(),
          "bias_decomposition: bias shape mismatch");
    check(dormant_set.size() == omega_hat.size(),
          "bias_decomposition: omega per dormant neuron required");
    std::vector<bool> dormant(z.size(), false);
    for (std::size_t idx : dormant_set) {
        check(idx < z.size(), "bias_decomposition: dormant index out of range");
        dormant[idx] = true;
    }
    BiasDecomposition d;
    d.live = Matrix(1, a_next.rows());
    d.effective_dormant_bias = Matrix(1, a_next.rows());
    d.bias = b_next;
    for (std::size_t r = 0; r < a_next.rows(); ++r)
        for (std::size_t i = 0; i < z.size(); ++i)
            if (!dormant[i]) d.live(0, r) += z[i] * a_next(r, i);
    for (std::size_t k = 0; k < dormant_set.size(); ++k)
        for (std::size_t r = 0; r < a_next.rows(); ++r)
            d.effective_dormant_bias(0, r) += omega_hat[k] * a_next(r, dormant_set[k]);
    return d;
}

std::pair<double, double> contribution_split(const Network& net, const Matrix& batch,
                                             const DormancyReport& dormancy) {
    check(batch.rows() > 0, "contribution_split: empty batch");
    ForwardResult fr = net.forward(batch);
    check(!fr.hidden.empty(), "contribution_split: network has no hidden layers");
    const Matrix& z = fr.hidden.back();
    check(dormancy.neurons.size() == z.cols(),
          "contribution_split: dormancy report does not match final hidden layer");
    const auto* head = dynamic_cast<const DenseLayer*>(&net.layer(net.layer_count() - 1));
    check(head != nullptr && head->activation() == Activation::Identity,
          "contribution_split: network must end in a linear head");
    const Matrix& a = head->weights();  // out x hidden

    double live_sum = 0.0, dormant_sum = 0.0;
    for (std::size_t s = 0; s < z.rows(); ++s) {
        for (std::size_t o = 0; o < a.rows(); ++o) {
            double live = 0.0, dorm = 0.0;
            for (std::size_t i = 0; i < z.cols(); ++i) {
                const double c = z(s, i) * a(o, i);
                if (dormancy.neurons[i].dormant)
                    dorm += c;
                else
                    live += c;
            }
            live_sum += std::abs(live);
            dormant_sum += std::abs(dorm);
        }
    }
    const double denom = static_cast<double>(z.rows() * a.rows());
    return {live_sum / denom, dormant_sum / denom};
}

}  // namespace hrlab
