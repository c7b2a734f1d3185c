#include "lpoint/tightbinding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "lpoint/error.hpp"

namespace lpoint {

void TBParams::validate() const {
    for (double v : {es, ep, esstar, vss, vxx, vxy, vsp, vsstarp, soc_lambda}) {
        if (!std::isfinite(v)) throw PreconditionError("tight-binding parameter not finite");
    }
    if (soc_lambda < 0.0) throw PreconditionError("soc_lambda must be >= 0");
}

std::vector<std::string> basis_labels() {
    static const std::array<const char*, 5> orb{"s", "px", "py", "pz", "s*"};
    std::vector<std::string> out;
    for (int atom = 0; atom < kAtoms; ++atom)
        for (int o = 0; o < kOrbitalsPerAtom; ++o)
            for (int s = 0; s < 2; ++s)
                out.push_back(std::string(atom == 0 ? "A:" : "B:") + orb[o] + (s == 0 ? "↑" : "↓"));
    return out;
}

namespace {

// Slater-Koster integrals recovered from the Vogl combinations.
struct TwoCentre {
    double ss_sigma, sp_sigma, sstarp_sigma, pp_sigma, pp_pi;
};

TwoCentre two_centre(const TBParams& p) {
    TwoCentre t{};
    t.ss_sigma = p.vss / 4.0;
    t.sp_sigma = p.vsp * std::sqrt(3.0) / 4.0;
    t.sstarp_sigma = p.vsstarp * std::sqrt(3.0) / 4.0;
    t.pp_pi = (p.vxx - p.vxy) / 4.0;
    t.pp_sigma = t.pp_pi + 0.75 * p.vxy;
    return t;
}

// Bond vectors from an A atom to its four B neighbours, units of a.
const std::array<Vec3, 4>& bonds() {
    static const std::array<Vec3, 4> d{Vec3(0.25, 0.25, 0.25), Vec3(0.25, -0.25, -0.25),
                                       Vec3(-0.25, 0.25, -0.25), Vec3(-0.25, -0.25, 0.25)};
    return d;
}

// Orbital hopping block <A,alpha| H |B,beta> for bond d pointing from A to B.
Eigen::Matrix<double, 5, 5> hopping_block(const TwoCentre& t, const Vec3& d) {
    const Vec3 l = d.normalized();
    Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
    m(0, 0) = t.ss_sigma;
    for (int i = 0; i < 3; ++i) {
        m(0, 1 + i) = l(i) * t.sp_sigma;
        m(1 + i, 0) = -l(i) * t.sp_sigma;
        m(4, 1 + i) = l(i) * t.sstarp_sigma;
        m(1 + i, 4) = -l(i) * t.sstarp_sigma;
        for (int j = 0; j < 3; ++j) {
            m(1 + i, 1 + j) = l(i) * l(j) * (t.pp_sigma - t.pp_pi) + (i == j ? t.pp_pi : 0.0);
        }
    }
    return m;
}

}  // namespace

Eigen::Matrix<cplx, 6, 6> p_shell_soc(double lambda) {
    // (L_k)_{ij} = -i eps_{kij} on (px, py, pz); S = sigma / 2.
    const cplx I(0.0, 1.0);
    Eigen::Matrix2cd sigma[3];
    sigma[0] << 0, 1, 1, 0;
    sigma[1] << 0, -I, I, 0;
    sigma[2] << 1, 0, 0, -1;
    auto eps = [](int a, int b, int c) -> double {
        if (a == b || b == c || a == c) return 0.0;
        return ((a + 1) % 3 == b) ? 1.0 : -1.0;
    };
    Eigen::Matrix<cplx, 6, 6> h = Eigen::Matrix<cplx, 6, 6>::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                const double e = eps(k, i, j);
                if (e == 0.0) continue;
                h.block<2, 2>(2 * i, 2 * j) += (0.5 * lambda) * (-I * e) * sigma[k];
            }
    return h;
}

CMatrix build_hamiltonian(const TBParams& params, const KVector& k) {
    params.validate();
    const TwoCentre t = two_centre(params);
    const Vec3 kv = 2.0 * M_PI * k.vec();

    Eigen::Matrix<cplx, 5, 5> hab = Eigen::Matrix<cplx, 5, 5>::Zero();
    for (const auto& d : bonds()) {
        const cplx phase = std::polar(1.0, kv.dot(d));
        hab += phase * hopping_block(t, d).cast<cplx>();
    }

    CMatrix h = CMatrix::Zero(kBasisSize, kBasisSize);
    const std::array<double, 5> onsite{params.es, params.ep, params.ep, params.ep, params.esstar};
    for (int atom = 0; atom < kAtoms; ++atom)
        for (int o = 0; o < kOrbitalsPerAtom; ++o)
            for (int s = 0; s < 2; ++s) {
                const int i = 10 * atom + 2 * o + s;
                h(i, i) = onsite[static_cast<std::size_t>(o)];
            }
    for (int a = 0; a < kOrbitalsPerAtom; ++a)
        for (int b = 0; b < kOrbitalsPerAtom; ++b)
            for (int s = 0; s < 2; ++s) {
                const int i = 2 * a + s;
                const int j = 10 + 2 * b + s;
                h(i, j) = hab(a, b);
                h(j, i) = std::conj(hab(a, b));
            }
    if (params.soc_lambda != 0.0) {
        const auto so = p_shell_soc(params.soc_lambda);
        for (int atom = 0; atom < kAtoms; ++atom) {
            h.block<6, 6>(10 * atom + 2, 10 * atom + 2) += so;
        }
    }
    return h;
}

EigenPoint solve_point(const TBParams& params, const KVector& k) {
    params.validate();
    auto eig = jacobi_eigh(build_hamiltonian(params, k));
    return {k, std::move(eig.values), std::move(eig.vectors)};
}

double BandSet::connected_energy(int band, std::size_t k_index) const {
    const int rank = connected.at(static_cast<std::size_t>(band)).at(k_index);
    return energies.at(k_index)(rank);
}

double BandSet::min_match_overlap() const {
    double m = 1.0;
    for (const auto& row : overlap)
        for (double v : row) m = std::min(m, v);
    return m;
}

namespace {

// Matches energy ranks at k-point i to ranks at i+1. Returns match and
// the per-rank overlap quality.
std::pair<std::vector<int>, std::vector<double>> match_neighbours(const Eigen::VectorXd& e0,
                                                                  const CMatrix& v0,
                                                                  const Eigen::VectorXd& e1,
                                                                  const CMatrix& v1, double tol) {
    const int n = static_cast<int>(e0.size());
    const Eigen::MatrixXd o = (v0.adjoint() * v1).cwiseAbs2();
    const auto g0 = degenerate_groups(e0, tol);
    const auto g1 = degenerate_groups(e1, tol);
    std::vector<int> group0(static_cast<std::size_t>(n)), group1(static_cast<std::size_t>(n));
    for (std::size_t g = 0; g < g0.size(); ++g)
        for (int i = g0[g].first; i < g0[g].second; ++i) group0[static_cast<std::size_t>(i)] = static_cast<int>(g);
    for (std::size_t g = 0; g < g1.size(); ++g)
        for (int i = g1[g].first; i < g1[g].second; ++i) group1[static_cast<std::size_t>(i)] = static_cast<int>(g);

    // Group-to-group overlap, normalized by the smaller group size.
    Eigen::MatrixXd w(static_cast<Eigen::Index>(g0.size()), static_cast<Eigen::Index>(g1.size()));
    for (std::size_t a = 0; a < g0.size(); ++a)
        for (std::size_t b = 0; b < g1.size(); ++b) {
            double s = 0.0;
            for (int i = g0[a].first; i < g0[a].second; ++i)
                for (int j = g1[b].first; j < g1[b].second; ++j) s += o(i, j);
            const int size = std::min(g0[a].second - g0[a].first, g1[b].second - g1[b].first);
            w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s / size;
        }

    struct Pair {
        double w;
        int i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            pairs.push_back({w(group0[static_cast<std::size_t>(i)], group1[static_cast<std::size_t>(j)]), i, j});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.w != y.w) return x.w > y.w;
        const int dx = std::abs(x.i - x.j), dy = std::abs(y.i - y.j);
        if (dx != dy) return dx < dy;
        return x.i < y.i;
    });
    std::vector<int> match(static_cast<std::size_t>(n), -1);
    std::vector<double> quality(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    int assigned = 0;
    for (const auto& p : pairs) {
        if (assigned == n) break;
        if (match[static_cast<std::size_t>(p.i)] >= 0 || taken[static_cast<std::size_t>(p.j)]) continue;
        match[static_cast<std::size_t>(p.i)] = p.j;
        quality[static_cast<std::size_t>(p.i)] = std::sqrt(std::min(1.0, p.w));
        taken[static_cast<std::size_t>(p.j)] = true;
        ++assigned;
    }
    return {match, quality};
}

}  // namespace

BandSet solve_bands(const TBParams& params, const KPath& path, const BandOptions& opts) {
    params.validate();
    BandSet out;
    out.path = path;
    out.kpoints = path.points();
    const std::size_t nk = out.kpoints.size();
    out.energies.resize(nk);
    out.states.resize(nk);

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(nk, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < nk; i = next++) {
            try {
                auto eig = jacobi_eigh(build_hamiltonian(params, out.kpoints[i].k));
                out.energies[i] = std::move(eig.values);
                out.states[i] = std::move(eig.vectors);
            } catch (const ConvergenceError& e) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::make_exception_ptr(ConvergenceError(
                        std::string(e.what()) + " at k-point " + std::to_string(i), e.last_residual(), i));
                }
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const int nb = kBasisSize;
    out.connected.assign(static_cast<std::size_t>(nb), std::vector<int>(nk, 0));
    out.overlap.assign(static_cast<std::size_t>(nb), std::vector<double>(nk > 0 ? nk - 1 : 0, 1.0));
    for (int b = 0; b < nb; ++b) {
        if (nk > 0) out.connected[static_cast<std::size_t>(b)][0] = b;
    }
    for (std::size_t i = 0; i + 1 < nk; ++i) {
        // Segment boundaries restart the identity assignment.
        if (out.kpoints[i].segment != out.kpoints[i + 1].segment) {
            for (int b = 0; b < nb; ++b) out.connected[static_cast<std::size_t>(b)][i + 1] = b;
            continue;
        }
        auto [match, quality] = match_neighbours(out.energies[i], out.states[i], out.energies[i + 1],
                                                 out.states[i + 1], opts.degeneracy_tol);
        for (int b = 0; b < nb; ++b) {
            const int rank = out.connected[static_cast<std::size_t>(b)][i];
            out.connected[static_cast<std::size_t>(b)][i + 1] = match[static_cast<std::size_t>(rank)];
            out.overlap[static_cast<std::size_t>(b)][i] = quality[static_cast<std::size_t>(rank)];
        }
    }
    return out;
}

namespace {

OrbitalFractions fractions_of_state(const CVector& psi, const Vec3& axis) {
    const Vec3 n = axis.normalized();
    OrbitalFractions f;
    for (int atom = 0; atom < kAtoms; ++atom)
        for (int s = 0; s < 2; ++s) {
            f.s += std::norm(psi(basis_index(atom, Orbital::s, s)));
            f.sstar += std::norm(psi(basis_index(atom, Orbital::sstar, s)));
            double ptot = 0.0;
            cplx along = 0.0;
            for (int i = 0; i < 3; ++i) {
                const cplx c = psi(basis_index(atom, static_cast<Orbital>(1 + i), s));
                ptot += std::norm(c);
                along += n(i) * c;
            }
            f.pz += std::norm(along);
            f.p += ptot - std::norm(along);
        }
    const double total = f.sum();
    f.s /= total;
    f.p /= total;
    f.pz /= total;
    f.sstar /= total;
    return f;
}

OrbitalFractions averaged_fractions(const Eigen::VectorXd& energies, const CMatrix& states, int band_index,
                                    const Vec3& axis, double tol) {
    if (band_index < 0 || band_index >= energies.size()) {
        throw PreconditionError("orbital_fractions: band index out of range");
    }
    for (const auto& [begin, end] : degenerate_groups(energies, tol)) {
        if (band_index < begin || band_index >= end) continue;
        OrbitalFractions acc;
        for (int i = begin; i < end; ++i) {
            const auto f = fractions_of_state(states.col(i), axis);
            acc.s += f.s;
            acc.p += f.p;
            acc.pz += f.pz;
            acc.sstar += f.sstar;
        }
        const double m = end - begin;
        acc.s /= m;
        acc.p /= m;
        acc.pz /= m;
        acc.sstar /= m;
        return acc;
    }
    throw PreconditionError("orbital_fractions: band not found");
}

}  // namespace

OrbitalFractions orbital_fractions(const BandSet& bands, int band_index, std::size_t k_index,
                                   const Vec3& axis, double degeneracy_tol) {
    if (k_index >= bands.size()) throw PreconditionError("orbital_fractions: k index out of range");
    return averaged_fractions(bands.energies[k_index], bands.states[k_index], band_index, axis,
                              degeneracy_tol);
}

OrbitalFractions orbital_fractions(const EigenPoint& point, int band_index, const Vec3& axis,
                                   double degeneracy_tol) {
    return averaged_fractions(point.energies, point.states, band_index, axis, degeneracy_tol);
}

BandTopology band_topology(const TBParams& params, std::size_t samples) {
    params.validate();
    if (samples < 3) throw PreconditionError("band_topology: need at least 3 samples");
    const int cb = kValenceStates;
    auto conduction = [&](double t) { return solve_point(params, KVector(0.0, 0.0, t)).energies(cb); };

    BandTopology top;
    top.vbm = solve_point(params, points::Gamma).energies(cb - 1);

    std::size_t best = 0;
    double best_e = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
        const double e = conduction(t);
        if (i == 0 || e < best_e) {
            best = i;
            best_e = e;
        }
    }
    const double step = 1.0 / static_cast<double>(samples - 1);
    double lo = std::max(0.0, (static_cast<double>(best) - 1.0) * step);
    double hi = std::min(1.0, (static_cast<double>(best) + 1.0) * step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    double fa = conduction(a), fb = conduction(b);
    for (int it = 0; it < 60; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = conduction(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = conduction(b);
        }
    }
    top.k0 = 0.5 * (lo + hi);
    top.e_x0 = std::min({conduction(top.k0), best_e});
    top.e_l = solve_point(params, points::L).energies(cb);
    top.gap = top.e_x0 - top.vbm;
    top.e_l_rel = top.e_l - top.vbm;
    top.l_minus_x0 = top.e_l - top.e_x0;

    const auto lam = solve_point(params, KVector(0.25, 0.25, 0.25));
    top.s_frac_lambda = orbital_fractions(lam, cb, Vec3(1.0, 1.0, 1.0)).s;
    const auto del = solve_point(params, KVector(0.0, 0.0, 0.85));
    const auto fd = orbital_fractions(del, cb, Vec3::UnitZ());
    top.s_frac_delta = fd.s;
    top.pz_frac_delta = fd.pz;
    return top;
}

}  // namespace lpoint
