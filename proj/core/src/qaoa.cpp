#include "primecvp/qaoa.hpp"

#include <cmath>
#include <numbers>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_sizes(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw InvalidArgument(std::string(what) + ": size mismatch");
}

StateVector uniform_state(int n) {
    StateVector sv;
    sv.n = n;
    const std::size_t dim = std::size_t{1} << n;
    sv.amplitudes.assign(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    return sv;
}

}  // namespace

double fold_into_range(double x, double end) {
    if (!std::isfinite(x)) throw InvalidArgument("angle is not finite");
    const double period = 2.0 * end;
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    return r <= end ? r : period - r;
}

AngleSchedule::AngleSchedule(std::vector<double> gamma, std::vector<double> beta)
    : gamma_(std::move(gamma)), beta_(std::move(beta)) {
    if (gamma_.size() != beta_.size()) throw InvalidArgument("AngleSchedule: gamma/beta lengths differ");
    for (double& g : gamma_) g = fold_into_range(g, kTwoPi);
    for (double& b : beta_) b = fold_into_range(b, std::numbers::pi);
}

AngleSchedule AngleSchedule::zeros(int p) {
    if (p < 0) throw InvalidArgument("AngleSchedule: negative depth");
    return {std::vector<double>(static_cast<std::size_t>(p), 0.0),
            std::vector<double>(static_cast<std::size_t>(p), 0.0)};
}

AngleSchedule AngleSchedule::from_flat(std::span<const double> x) {
    if (x.size() % 2 != 0) throw InvalidArgument("AngleSchedule: flat vector has odd length");
    const std::size_t p = x.size() / 2;
    return {std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)),
            std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(p), x.end())};
}

std::vector<double> AngleSchedule::flat() const {
    std::vector<double> x = gamma_;
    x.insert(x.end(), beta_.begin(), beta_.end());
    return x;
}

double StateVector::norm2() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

OutcomeDistribution probabilities(const StateVector& sv) {
    OutcomeDistribution d;
    d.probs.reserve(sv.amplitudes.size());
    for (const auto& a : sv.amplitudes) d.probs.push_back(std::norm(a));
    return d;
}

StateVector run_qaoa(const CostDiagonal& diag, const AngleSchedule& angles) {
    StateVector sv = uniform_state(diag.n);
    check_sizes(sv.amplitudes.size(), diag.energies.size(), "run_qaoa");
    const std::size_t dim = sv.amplitudes.size();
    auto& a = sv.amplitudes;

    for (int layer = 0; layer < angles.depth(); ++layer) {
        const double gamma = angles.gamma()[static_cast<std::size_t>(layer)];
        const double beta = angles.beta()[static_cast<std::size_t>(layer)];
        if (gamma != 0.0) {
            for (std::size_t z = 0; z < dim; ++z) a[z] *= std::polar(1.0, -gamma * diag.energies[z]);
        }
        if (beta == 0.0) continue;
        const double c = std::cos(std::numbers::pi * beta / 2.0);
        const Amplitude is(0.0, std::sin(std::numbers::pi * beta / 2.0));
        for (int j = 0; j < diag.n; ++j) {
            const std::size_t stride = std::size_t{1} << j;
            for (std::size_t base = 0; base < dim; base += 2 * stride) {
                for (std::size_t z = base; z < base + stride; ++z) {
                    const Amplitude lo = a[z];
                    const Amplitude hi = a[z + stride];
                    a[z] = c * lo + is * hi;
                    a[z + stride] = is * lo + c * hi;
                }
            }
        }
    }
    return sv;
}

StateVector dense_oracle(const CostDiagonal& diag, const AngleSchedule& angles) {
    const int n = diag.n;
    if (n > 4) throw ResourceLimit("dense_oracle: at most 4 qubits");
    using Matrix = std::vector<std::vector<Amplitude>>;
    const std::size_t dim = std::size_t{1} << n;
    check_sizes(dim, diag.energies.size(), "dense_oracle");

    auto matvec = [dim](const Matrix& m, const std::vector<Amplitude>& v) {
        std::vector<Amplitude> out(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            Amplitude s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) s += m[r][k] * v[k];
            out[r] = s;
        }
        return out;
    };
    // Kronecker product a (x) b, with a acting on the more significant bits.
    auto kron = [](const Matrix& a, const Matrix& b) {
        const std::size_t ra = a.size();
        const std::size_t rb = b.size();
        Matrix out(ra * rb, std::vector<Amplitude>(ra * rb));
        for (std::size_t i = 0; i < ra; ++i)
            for (std::size_t j = 0; j < ra; ++j)
                for (std::size_t k = 0; k < rb; ++k)
                    for (std::size_t l = 0; l < rb; ++l) out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
        return out;
    };

    std::vector<Amplitude> state(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    for (int layer = 0; layer < angles.depth(); ++layer) {
        const double gamma = angles.gamma()[static_cast<std::size_t>(layer)];
        const double beta = angles.beta()[static_cast<std::size_t>(layer)];

        Matrix phase(dim, std::vector<Amplitude>(dim));
        for (std::size_t z = 0; z < dim; ++z) {
            phase[z][z] = Amplitude(std::cos(gamma * diag.energies[z]), -std::sin(gamma * diag.energies[z]));
        }
        const double c = std::cos(std::numbers::pi * beta / 2.0);
        const double s = std::sin(std::numbers::pi * beta / 2.0);
        const Matrix rot{{Amplitude(c, 0.0), Amplitude(0.0, s)}, {Amplitude(0.0, s), Amplitude(c, 0.0)}};
        Matrix mixer{{Amplitude(1.0, 0.0)}};
        for (int q = n - 1; q >= 0; --q) mixer = kron(mixer, rot);

        state = matvec(mixer, matvec(phase, state));
    }
    StateVector sv;
    sv.n = n;
    sv.amplitudes = std::move(state);
    return sv;
}

double expectation(const OutcomeDistribution& dist, const CostDiagonal& diag) {
    check_sizes(dist.probs.size(), diag.energies.size(), "expectation");
    double s = 0.0;
    for (std::size_t z = 0; z < dist.probs.size(); ++z) s += dist.probs[z] * diag.energies[z];
    return s;
}

double expectation(const StateVector& sv, const CostDiagonal& diag) {
    check_sizes(sv.amplitudes.size(), diag.energies.size(), "expectation");
    double s = 0.0;
    for (std::size_t z = 0; z < sv.amplitudes.size(); ++z) s += std::norm(sv.amplitudes[z]) * diag.energies[z];
    return s;
}

double refinement_probability(const OutcomeDistribution& dist, const CostDiagonal& diag) {
    check_sizes(dist.probs.size(), diag.energies.size(), "refinement_probability");
    double s = 0.0;
    for (std::size_t z = 0; z < dist.probs.size(); ++z) {
        if (diag.energies[z] < diag.baseline) s += dist.probs[z];
    }
    return s;
}

double best_solution_probability(const OutcomeDistribution& dist, const CostDiagonal& diag) {
    check_sizes(dist.probs.size(), diag.energies.size(), "best_solution_probability");
    double s = 0.0;
    for (Bitstring z : diag.argmin_set) s += dist.probs[z];
    return s;
}

}  // namespace primecvp
