#include "lpoint/injection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <mutex>
#include <thread>

#include "lpoint/error.hpp"

namespace lpoint {

void DotSpec::validate() const {
    if (orbital_levels < 1) throw PreconditionError("orbital_levels must be >= 1");
    if (l_level_index < 1 || l_level_index > orbital_levels) {
        throw PreconditionError("l_level_index must be in [1, orbital_levels]");
    }
    if (static_cast<int>(level_energies.size()) != orbital_levels) {
        throw PreconditionError("level_energies must have orbital_levels entries");
    }
    for (std::size_t i = 1; i < level_energies.size(); ++i) {
        if (!(level_energies[i] > level_energies[i - 1])) {
            throw PreconditionError("level energies must be strictly increasing");
        }
    }
    if (!(charging_energy >= 0.0)) throw PreconditionError("charging energy must be >= 0");
}

DotSpec default_dot_spec(int orbital_levels, int l_level_index, double spacing_ev, double delta_e_ev,
                         double charging_ev) {
    if (!(spacing_ev > 0.0) || !(delta_e_ev > 0.0)) throw PreconditionError("level spacing and gap must be > 0");
    DotSpec s;
    s.orbital_levels = orbital_levels;
    s.l_level_index = l_level_index;
    s.charging_energy = charging_ev;
    for (int i = 0; i < orbital_levels; ++i) {
        const int j = i - l_level_index;  // levels above L
        if (i < l_level_index) {
            s.level_energies.push_back(i * spacing_ev);
        } else {
            s.level_energies.push_back((l_level_index - 1) * spacing_ev + delta_e_ev + j * spacing_ev);
        }
    }
    s.validate();
    return s;
}

double electron_mu(const DotSpec& spec, int n) {
    if (n < 1 || n > 2 * spec.orbital_levels) throw PreconditionError("electron number out of range");
    return spec.level_energies[static_cast<std::size_t>((n - 1) / 2)] + spec.charging_energy * (n - 1);
}

Window stop_window(const DotSpec& spec, double delta_e_ev) {
    const double lo = electron_mu(spec, 2 * spec.x0_levels() + 1);
    return {lo, lo + delta_e_ev};
}

DeviceState DeviceState::make(const DotSpec& spec, double mu_s, double mu_d, double delta_e) {
    spec.validate();
    DeviceState s;
    s.mu_s = mu_s;
    s.mu_d = mu_d;
    s.delta_e_l_gamma = delta_e;
    for (int d : {kQubit1, kQubit2}) s.occupancy[static_cast<std::size_t>(d)].assign(2 * spec.orbital_levels, 0);
    return s;
}

int DeviceState::electrons(int dot) const {
    const auto& o = occupancy.at(static_cast<std::size_t>(dot));
    return static_cast<int>(std::count(o.begin(), o.end(), 1));
}

int DeviceState::total_electrons() const { return electrons(kQubit1) + electrons(kQubit2); }

int DeviceState::l_electrons(int dot, const DotSpec& spec) const {
    const auto& o = occupancy.at(static_cast<std::size_t>(dot));
    if (o.empty()) return 0;
    const int l = spec.l_level();
    return o[static_cast<std::size_t>(2 * l)] + o[static_cast<std::size_t>(2 * l + 1)];
}

int DeviceState::x0_electrons(int dot, const DotSpec& spec) const {
    const auto& o = occupancy.at(static_cast<std::size_t>(dot));
    if (o.empty()) return 0;
    return static_cast<int>(std::count(o.begin(), o.begin() + 2 * spec.x0_levels(), 1));
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::inject: return "inject";
        case EventKind::tunnel_L_to_L: return "tunnel_L_to_L";
        case EventKind::tunnel_L_to_X0_relax: return "tunnel_L_to_X0_relax";
        case EventKind::blockade: return "blockade";
        case EventKind::drain_flush: return "drain_flush";
        case EventKind::detect_L: return "detect_L";
        case EventKind::detect_X0: return "detect_X0";
        case EventKind::noop: return "noop";
        case EventKind::warning: return "warning";
    }
    return "unknown";
}

void StochasticParams::validate() const {
    if (!(p_l >= 0.0 && p_l <= 1.0)) throw PreconditionError("p_L must be in [0, 1]");
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void EventLog::emit(const DeviceState& state, EventKind kind, int from, int to, int moved) {
    events_.push_back({static_cast<int>(events_.size()), kind, from, to, moved});
    if (observer_) observer_(state, events_.back());
}

namespace {

int first_empty(const std::vector<int>& occ, int begin_slot, int end_slot) {
    for (int i = begin_slot; i < end_slot; ++i)
        if (occ[static_cast<std::size_t>(i)] == 0) return i;
    return -1;
}

}  // namespace

int fill_from_source(DeviceState& state, const DotSpec& spec, EventLog& log) {
    if (!state.barrier_open[0]) {
        log.emit(state, EventKind::warning, kSource, kQubit1, 0);
        return 0;
    }
    auto& occ = state.occupancy[kQubit1];
    int added = 0;
    while (state.l_electrons(kQubit1, spec) == 0) {
        const int slot = first_empty(occ, 0, 2 * spec.orbital_levels);
        if (slot < 0) break;
        const int level = slot / 2;
        const double mu = spec.level_energies[static_cast<std::size_t>(level)] +
                          spec.charging_energy * state.electrons(kQubit1);
        if (mu > state.mu_s) break;
        occ[static_cast<std::size_t>(slot)] = 1;
        ++added;
        log.emit(state, EventKind::inject, kSource, kQubit1, 1);
    }
    return added;
}

Channel draw_channel(const StochasticParams& params, std::mt19937_64& rng) {
    return unit_draw(rng) < params.p_l ? Channel::L : Channel::X0;
}

bool shuttle(DeviceState& state, const DotSpec& spec, Channel channel, EventLog& log) {
    if (!state.barrier_open[1]) {
        log.emit(state, EventKind::warning, kQubit1, kQubit2, 0);
        return false;
    }
    const int l = spec.l_level();
    auto& q1 = state.occupancy[kQubit1];
    auto& q2 = state.occupancy[kQubit2];
    int src = -1;
    for (int s : {2 * l + 1, 2 * l})
        if (q1[static_cast<std::size_t>(s)] == 1) src = s;
    if (src < 0) {
        log.emit(state, EventKind::noop, kQubit1, kQubit2, 0);
        return false;
    }
    if (state.l_electrons(kQubit2, spec) > 0) {
        log.emit(state, EventKind::blockade, kQubit1, kQubit2, 0);
        return false;
    }
    const int dst = channel == Channel::L ? first_empty(q2, 2 * l, 2 * l + 2) : first_empty(q2, 0, 2 * spec.x0_levels());
    if (dst < 0) {
        log.emit(state, EventKind::blockade, kQubit1, kQubit2, 0);
        return false;
    }
    q1[static_cast<std::size_t>(src)] = 0;
    q2[static_cast<std::size_t>(dst)] = 1;
    log.emit(state, channel == Channel::L ? EventKind::tunnel_L_to_L : EventKind::tunnel_L_to_X0_relax, kQubit1,
             kQubit2, 1);
    return true;
}

Detection detect(const std::vector<ProtocolEvent>& events, std::size_t from) {
    if (from >= events.size()) throw PreconditionError("detect: empty event window");
    int transfers = 0;
    for (std::size_t i = from; i < events.size(); ++i) {
        if (events[i].kind == EventKind::tunnel_L_to_L || events[i].kind == EventKind::tunnel_L_to_X0_relax)
            ++transfers;
    }
    if (transfers == 0) throw PreconditionError("detect: no transfer in the window, no current signal");
    return transfers == 1 ? Detection::L : Detection::X0;
}

int flush_drain(DeviceState& state, const DotSpec& spec, EventLog& log) {
    if (!state.barrier_open[2] || !(state.mu_d < spec.level_energies.front())) {
        log.emit(state, EventKind::warning, kQubit2, kDrain, 0);
        return 0;
    }
    auto& q2 = state.occupancy[kQubit2];
    int removed = 0;
    for (int s = 0; s < 2 * spec.x0_levels(); ++s) {
        removed += q2[static_cast<std::size_t>(s)];
        q2[static_cast<std::size_t>(s)] = 0;
    }
    log.emit(state, EventKind::drain_flush, kQubit2, kDrain, removed);
    return removed;
}

ProtocolReport run_protocol(const ProtocolConfig& cfg, const EventObserver& observer) {
    cfg.spec.validate();
    cfg.params.validate();
    if (cfg.max_retries < 0) throw PreconditionError("max_retries must be >= 0");
    const double mu_s = std::isnan(cfg.mu_s) ? [&] {
        const Window w = stop_window(cfg.spec, cfg.delta_e_l_gamma);
        return 0.5 * (w.lo + w.hi);
    }() : cfg.mu_s;

    DeviceState state = DeviceState::make(cfg.spec, mu_s, cfg.mu_d, cfg.delta_e_l_gamma);
    EventLog log(observer);
    std::mt19937_64 rng(cfg.params.seed);
    ProtocolReport rep;
    const int guard = 2 * cfg.spec.orbital_levels + 2;

    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        ++rep.attempts;
        fill_from_source(state, cfg.spec, log);
        const Channel ch = draw_channel(cfg.params, rng);
        const std::size_t window = log.size();
        int transfers = 0;
        for (int i = 0; i < guard; ++i) {
            if (!shuttle(state, cfg.spec, ch, log)) break;
            ++transfers;
            fill_from_source(state, cfg.spec, log);
        }
        rep.transfers_per_attempt.push_back(transfers);
        const Detection det = detect(log.events(), window);
        log.emit(state, det == Detection::L ? EventKind::detect_L : EventKind::detect_X0, kQubit2, -1, 0);
        if (det == Detection::L) {
            rep.success = true;
            break;
        }
        if (attempt < cfg.max_retries) {
            flush_drain(state, cfg.spec, log);
            ++rep.flushes;
        }
    }
    rep.retries = rep.attempts - 1;
    rep.events = log.events();
    rep.final_state = std::move(state);
    return rep;
}

MonteCarloStats run_monte_carlo(const ProtocolConfig& cfg, int trials, unsigned threads) {
    if (trials < 1) throw PreconditionError("trials must be >= 1");
    cfg.params.validate();
    std::vector<int> retries(static_cast<std::size_t>(trials), 0);
    std::vector<char> success(static_cast<std::size_t>(trials), 0);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (int t = next++; t < trials; t = next++) {
            try {
                ProtocolConfig c = cfg;
                const auto s = static_cast<std::uint32_t>(cfg.params.seed);
                const auto s_hi = static_cast<std::uint32_t>(cfg.params.seed >> 32);
                std::seed_seq seq{s, s_hi, static_cast<std::uint32_t>(t)};
                std::array<std::uint32_t, 2> words{};
                seq.generate(words.begin(), words.end());
                c.params.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
                const ProtocolReport r = run_protocol(c);
                retries[static_cast<std::size_t>(t)] = r.retries;
                success[static_cast<std::size_t>(t)] = r.success ? 1 : 0;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n = std::min<unsigned>(n, static_cast<unsigned>(trials));
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    MonteCarloStats st;
    st.trials = trials;
    st.p_l = cfg.params.p_l;
    st.max_retries = cfg.max_retries;
    st.retry_histogram.assign(static_cast<std::size_t>(cfg.max_retries + 1), 0);
    int ok = 0;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        if (!success[static_cast<std::size_t>(t)]) continue;
        ++ok;
        sum += retries[static_cast<std::size_t>(t)];
        ++st.retry_histogram[static_cast<std::size_t>(retries[static_cast<std::size_t>(t)])];
    }
    const double p = cfg.params.p_l;
    const double q = 1.0 - p;
    const int R = cfg.max_retries;
    st.success_rate = static_cast<double>(ok) / trials;
    st.expected_success = 1.0 - std::pow(q, R + 1);
    st.success_sigma = std::sqrt(st.expected_success * (1.0 - st.expected_success) / trials);
    st.mean_retries = ok > 0 ? sum / ok : 0.0;

    // Geometric law truncated at R, conditioned on success.
    double m1 = 0.0, m2 = 0.0;
    for (int r = 0; r <= R; ++r) {
        const double w = p * std::pow(q, r);
        m1 += r * w;
        m2 += static_cast<double>(r) * r * w;
    }
    if (st.expected_success > 0.0) {
        m1 /= st.expected_success;
        m2 /= st.expected_success;
    }
    st.expected_mean_retries = m1;
    st.retries_sigma = ok > 0 ? std::sqrt(std::max(0.0, m2 - m1 * m1) / ok) : 0.0;
    return st;
}

void write_events_csv(std::ostream& os, const std::vector<ProtocolEvent>& events) {
    os << "step,kind,dot_from,dot_to,n_moved\n";
    for (const auto& e : events) {
        os << e.step << ',' << to_string(e.kind) << ',' << e.dot_from << ',' << e.dot_to << ',' << e.n_moved << '\n';
    }
}

}  // namespace lpoint
