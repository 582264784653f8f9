#include "dpnls/simulator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <vector>

#include "dpnls/errors.hpp"

namespace dpnls {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftPlan {
    int n;
    fftw_complex* buf;
    fftw_plan fwd, bwd;

    explicit FftPlan(int n_) : n(n_) {
        buf = fftw_alloc_complex(static_cast<size_t>(n));
        std::lock_guard<std::mutex> lk(planner_mutex());
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        {
            std::lock_guard<std::mutex> lk(planner_mutex());
            fftw_destroy_plan(fwd);
            fftw_destroy_plan(bwd);
        }
        fftw_free(buf);
    }

    // unnormalized in both directions (FFTW convention)
    void run(std::vector<std::complex<double>>& v, bool forward) {
        std::memcpy(buf, v.data(), sizeof(fftw_complex) * n);
        fftw_execute(forward ? fwd : bwd);
        std::memcpy(v.data(), buf, sizeof(fftw_complex) * n);
    }
};

std::vector<double> wavenumbers(int n, double L) {
    std::vector<double> k(n);
    const double base = 2.0 * M_PI / L;
    for (int j = 0; j < n; ++j) {
        k[j] = base * (j <= n / 2 ? j : j - n);
    }
    return k;
}

double h1_norm_sq(const std::vector<std::complex<double>>& hat,
                  const std::vector<double>& k, double dx) {
    const int n = static_cast<int>(hat.size());
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += (1.0 + k[j] * k[j]) * std::norm(hat[j]);
    return s * dx / n;
}

}  // namespace

FieldState make_state(const SolitonProfile& profile, int N) {
    if (N < 16 || N % 2 != 0) {
        throw DomainError("make_state: N must be even and at least 16");
    }
    if (static_cast<int>(profile.x.size()) != N / 2 + 1) {
        throw DomainError("make_state: profile must carry N/2 + 1 samples");
    }
    FieldState st;
    st.L_dom = 2.0 * profile.x.back();
    st.values.resize(N);
    for (int i = 0; i < N; ++i) {
        st.values[i] = profile.phi[std::abs(i - N / 2)];
    }
    st.time = 0.0;
    st.blew_up = false;
    return st;
}

FieldState profile_on_grid(const Nonlinearity& nl, double omega, int N, double quad_tol) {
    const double x_max = auto_x_max(omega);
    const SolitonProfile prof = build_profile(nl, omega, N / 2 + 1, x_max, quad_tol);
    return make_state(prof, N);
}

FieldState evolve(const Nonlinearity& nl, FieldState state, double dt, double t_end) {
    const int N = static_cast<int>(state.values.size());
    if (N < 16) throw DomainError("evolve: field too short");
    if (!(dt > 0.0)) throw DomainError("evolve: dt must be positive");
    if (state.blew_up) return state;

    const double dx = state.L_dom / N;
    const double k_max = M_PI / dx;
    if (dt * k_max * k_max > M_PI) {
        throw DomainError("evolve: dt too large for this grid (dt * k_max^2 > pi)");
    }
    const long steps = std::lround((t_end - state.time) / dt);
    if (steps <= 0) return state;

    const std::vector<double> k = wavenumbers(N, state.L_dom);
    std::vector<std::complex<double>> lin(N);
    for (int j = 0; j < N; ++j) {
        lin[j] = std::exp(std::complex<double>(0.0, -k[j] * k[j] * dt));
    }

    double peak0 = 0.0;
    for (const auto& v : state.values) peak0 = std::max(peak0, std::abs(v));
    const double blow_bar = 1e3 * peak0;

    FftPlan plan(N);
    const double pm1 = nl.p - 1.0, qm1 = nl.q - 1.0;
    auto half_kick = [&](double tau) {
        for (auto& v : state.values) {
            const double a2 = std::norm(v);
            if (a2 == 0.0) continue;
            const double phase = tau * (std::pow(a2, 0.5 * qm1) - std::pow(a2, 0.5 * pm1));
            v *= std::complex<double>(std::cos(phase), std::sin(phase));
        }
    };

    for (long s = 0; s < steps; ++s) {
        half_kick(0.5 * dt);
        plan.run(state.values, true);
        for (int j = 0; j < N; ++j) state.values[j] *= lin[j];
        plan.run(state.values, false);
        const double inv = 1.0 / N;
        for (auto& v : state.values) v *= inv;
        half_kick(0.5 * dt);
        state.time += dt;

        double peak = 0.0;
        for (const auto& v : state.values) peak = std::max(peak, std::abs(v));
        if (!std::isfinite(peak) || peak > blow_bar) {
            state.blew_up = true;
            return state;
        }
    }
    return state;
}

double discrete_mass(const FieldState& state) {
    const int N = static_cast<int>(state.values.size());
    const double dx = state.L_dom / N;
    double s = 0.0;
    for (const auto& v : state.values) s += std::norm(v);
    return s * dx;
}

double discrete_energy(const Nonlinearity& nl, const FieldState& state) {
    const int N = static_cast<int>(state.values.size());
    const double dx = state.L_dom / N;
    std::vector<std::complex<double>> hat = state.values;
    FftPlan plan(N);
    plan.run(hat, true);
    const std::vector<double> k = wavenumbers(N, state.L_dom);

    double grad = 0.0;
    for (int j = 0; j < N; ++j) grad += k[j] * k[j] * std::norm(hat[j]);
    grad *= dx / N;

    double lp = 0.0, lq = 0.0;
    for (const auto& v : state.values) {
        const double a = std::abs(v);
        lp += std::pow(a, nl.p + 1.0);
        lq += std::pow(a, nl.q + 1.0);
    }
    lp *= dx;
    lq *= dx;
    return 0.5 * grad + lp / (nl.p + 1.0) - lq / (nl.q + 1.0);
}

OrbitalDistance orbital_distance(const FieldState& state, const Nonlinearity& nl,
                                 double omega, double quad_tol) {
    const int N = static_cast<int>(state.values.size());
    const double dx = state.L_dom / N;
    const SolitonProfile prof =
        build_profile(nl, omega, N / 2 + 1, 0.5 * state.L_dom, quad_tol);
    const FieldState ref = make_state(prof, N);

    FftPlan plan(N);
    std::vector<std::complex<double>> uhat = state.values;
    std::vector<std::complex<double>> phat = ref.values;
    plan.run(uhat, true);
    plan.run(phat, true);
    const std::vector<double> k = wavenumbers(N, state.L_dom);

    // weighted cross-correlation C(y) = <u, phi(.-y)>_{H^1}
    std::vector<std::complex<double>> g(N);
    for (int j = 0; j < N; ++j) {
        g[j] = (1.0 + k[j] * k[j]) * uhat[j] * std::conj(phat[j]);
    }
    std::vector<std::complex<double>> corr = g;
    plan.run(corr, false);
    const double scale = dx / N;

    int best = 0;
    double best_mag = -1.0;
    for (int j = 0; j < N; ++j) {
        const double m = std::abs(corr[j]) * scale;
        if (m > best_mag) {
            best_mag = m;
            best = j;
        }
    }

    auto corr_at = [&](double y) {
        std::complex<double> c0(0.0, 0.0), c1(0.0, 0.0), c2(0.0, 0.0);
        for (int j = 0; j < N; ++j) {
            const std::complex<double> e =
                g[j] * std::exp(std::complex<double>(0.0, k[j] * y));
            c0 += e;
            c1 += std::complex<double>(0.0, k[j]) * e;
            c2 -= k[j] * k[j] * e;
        }
        struct Out { std::complex<double> c, cp, cpp; } o;
        o.c = c0 * scale;
        o.cp = c1 * scale;
        o.cpp = c2 * scale;
        return o;
    };

    // Newton on |C(y)|^2 around the best grid shift
    double y = best * dx;
    for (int it = 0; it < 5; ++it) {
        const auto o = corr_at(y);
        const double f1 = 2.0 * std::real(std::conj(o.c) * o.cp);
        const double f2 = 2.0 * (std::norm(o.cp) + std::real(std::conj(o.c) * o.cpp));
        if (!(f2 < 0.0)) break;  // not locally concave; keep current point
        double step = f1 / f2;
        step = std::clamp(step, -dx, dx);
        y -= step;
        if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(y))) break;
    }

    const auto o = corr_at(y);
    const double u_h1 = h1_norm_sq(uhat, k, dx);
    const double p_h1 = h1_norm_sq(phat, k, dx);
    const double d2 = std::max(0.0, u_h1 + p_h1 - 2.0 * std::abs(o.c));

    OrbitalDistance od;
    od.value = std::sqrt(d2);
    od.theta = std::arg(o.c);
    od.y = y >= 0.5 * state.L_dom ? y - state.L_dom : y;
    return od;
}

ExperimentResult stability_experiment(const Nonlinearity& nl, double omega,
                                      double eps, double t_end, int N, double dt,
                                      PerturbationKind kind, double quad_tol) {
    if (!(omega > 0.0)) throw DomainError("stability_experiment: omega must be positive");
    if (!(eps > 0.0)) throw DomainError("stability_experiment: eps must be positive");
    if (!(t_end > 0.0)) throw DomainError("stability_experiment: t_end must be positive");

    FieldState st = profile_on_grid(nl, omega, N, quad_tol);
    const double dx = st.L_dom / N;

    // reference soliton size in the orbital norm
    double p_h1;
    {
        FftPlan plan(N);
        std::vector<std::complex<double>> phat = st.values;
        plan.run(phat, true);
        const std::vector<double> k = wavenumbers(N, st.L_dom);
        p_h1 = std::sqrt(h1_norm_sq(phat, k, dx));
    }

    ExperimentResult res;
    res.profile_h1_norm = p_h1;

    switch (kind) {
        case PerturbationKind::scale:
            for (auto& v : st.values) v *= (1.0 + eps);
            break;
        case PerturbationKind::gaussian_bump:
            for (int i = 0; i < N; ++i) {
                const double x = -0.5 * st.L_dom + i * dx;
                st.values[i] += eps * std::exp(-x * x);
            }
            break;
    }

    const double record_dt = 0.25;
    const long stride = std::max(1L, std::lround(record_dt / dt));
    const long total_steps = std::lround(t_end / dt);

    auto record = [&]() {
        ExperimentRecord r;
        r.t = st.time;
        r.distance = orbital_distance(st, nl, omega, quad_tol).value;
        r.mass = discrete_mass(st);
        r.energy = discrete_energy(nl, st);
        res.series.push_back(r);
    };
    record();

    long done = 0;
    while (done < total_steps && !st.blew_up) {
        const long chunk = std::min(stride, total_steps - done);
        const double target = st.time + chunk * dt;
        st = evolve(nl, std::move(st), dt, target);
        done += chunk;
        if (st.blew_up) break;
        record();
    }

    res.blew_up = st.blew_up;
    res.max_distance = 0.0;
    for (const auto& r : res.series) {
        res.max_distance = std::max(res.max_distance, r.distance);
    }
    if (st.blew_up) {
        res.max_distance = std::numeric_limits<double>::infinity();
    }

    const double unit = eps * p_h1;
    if (st.blew_up || res.max_distance > 20.0 * unit) {
        res.verdict_hint = VerdictHint::consistent_with_unstable;
    } else if (res.max_distance < 5.0 * unit) {
        res.verdict_hint = VerdictHint::consistent_with_stable;
    } else {
        res.verdict_hint = VerdictHint::inconclusive;
    }
    return res;
}

const char* verdict_hint_name(VerdictHint v) {
    switch (v) {
        case VerdictHint::consistent_with_stable: return "consistent_with_stable";
        case VerdictHint::consistent_with_unstable: return "consistent_with_unstable";
        case VerdictHint::inconclusive: return "inconclusive";
    }
    return "unknown";
}

}  // namespace dpnls
