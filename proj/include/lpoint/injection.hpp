#pragma once

// Event-stepped simulation of the L-level injection protocol on the chain
// source -> Qubit(1) -> Qubit(2) -> drain.
//
// Dot indices: 0 source, 1 Qubit(1), 2 Qubit(2), 3 drain.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace lpoint {

inline constexpr int kSource = 0;
inline constexpr int kQubit1 = 1;
inline constexpr int kQubit2 = 2;
inline constexpr int kDrain = 3;

struct DotSpec {
    int orbital_levels = 6;
    int l_level_index = 4;            // 1-based
    std::vector<double> level_energies;  // eV, strictly increasing
    double charging_energy = 0.0;     // U, eV per added electron

    void validate() const;
    int l_level() const { return l_level_index - 1; }  // 0-based
    int x0_levels() const { return l_level_index - 1; }
};

// X0 levels at 0, s, 2s, ...; the L level one spacing above the last X0
// level; levels above L start delta_e higher.
DotSpec default_dot_spec(int orbital_levels = 6, int l_level_index = 4, double spacing_ev = 0.01,
                         double delta_e_ev = 0.05, double charging_ev = 0.0);

// Electrochemical potential for adding electron number n (1-based) in
// ascending fill order: E(level of n) + U (n - 1).
double electron_mu(const DotSpec& spec, int n);

// Source window [lo, hi) in which filling stops on the first L electron.
struct Window {
    double lo = 0.0;
    double hi = 0.0;
};
Window stop_window(const DotSpec& spec, double delta_e_ev);

struct DeviceState {
    double mu_s = 0.0;
    double mu_d = -1.0;
    double delta_e_l_gamma = 0.05;
    std::array<bool, 3> barrier_open{true, true, true};  // B1, B2, B3
    // occupancy[dot][2 * level + spin]; only Qubit(1) and Qubit(2) hold levels.
    std::array<std::vector<int>, 4> occupancy;

    static DeviceState make(const DotSpec& spec, double mu_s, double mu_d, double delta_e);
    int electrons(int dot) const;
    int total_electrons() const;
    int l_electrons(int dot, const DotSpec& spec) const;
    int x0_electrons(int dot, const DotSpec& spec) const;
};

enum class EventKind {
    inject,
    tunnel_L_to_L,
    tunnel_L_to_X0_relax,
    blockade,
    drain_flush,
    detect_L,
    detect_X0,
    noop,
    warning,
};

std::string to_string(EventKind k);

struct ProtocolEvent {
    int step = 0;
    EventKind kind = EventKind::noop;
    int dot_from = -1;
    int dot_to = -1;
    int n_moved = 0;
};

struct StochasticParams {
    double p_l = 0.5;
    std::uint64_t seed = 1;

    void validate() const;
};

// Uniform double in [0,1) from the top 53 bits of one draw.
double unit_draw(std::mt19937_64& rng);

using EventObserver = std::function<void(const DeviceState&, const ProtocolEvent&)>;

// Append-only event log that stamps steps and notifies an observer.
class EventLog {
public:
    explicit EventLog(EventObserver obs = {}) : observer_(std::move(obs)) {}
    void emit(const DeviceState& state, EventKind kind, int from, int to, int moved);
    const std::vector<ProtocolEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }

private:
    std::vector<ProtocolEvent> events_;
    EventObserver observer_;
};

// Fills Qubit(1) from the source in ascending order while the next
// electron's mu is <= mu_S; stops after the first electron on the L level.
int fill_from_source(DeviceState& state, const DotSpec& spec, EventLog& log);

enum class Channel { L, X0 };

Channel draw_channel(const StochasticParams& params, std::mt19937_64& rng);

// Moves the Qubit(1) L electron to Qubit(2) through the given channel.
// Returns true when an electron moved.
bool shuttle(DeviceState& state, const DotSpec& spec, Channel channel, EventLog& log);

enum class Detection { L, X0 };

// Classifies the events after index `from`: one transfer -> L, two or more
// -> X0. Throws PreconditionError when the window is empty or has no
// transfers.
Detection detect(const std::vector<ProtocolEvent>& events, std::size_t from = 0);

// Removes the X0 electrons of Qubit(2) into the drain. Returns the count.
int flush_drain(DeviceState& state, const DotSpec& spec, EventLog& log);

struct ProtocolReport {
    bool success = false;
    int retries = 0;
    int attempts = 0;
    int flushes = 0;
    std::vector<ProtocolEvent> events;
    std::vector<int> transfers_per_attempt;  // current signature per shuttle phase
    DeviceState final_state;
};

struct ProtocolConfig {
    DotSpec spec = default_dot_spec();
    double mu_s = NAN;  // NaN -> centre of the stop window
    double mu_d = -1.0;
    double delta_e_l_gamma = 0.05;
    StochasticParams params{};
    int max_retries = 5;
};

ProtocolReport run_protocol(const ProtocolConfig& cfg, const EventObserver& observer = {});

struct MonteCarloStats {
    int trials = 0;
    double p_l = 0.0;
    int max_retries = 0;
    double success_rate = 0.0;
    double expected_success = 0.0;   // 1 - (1 - p)^(R + 1)
    double success_sigma = 0.0;      // binomial standard error
    double mean_retries = 0.0;       // successful trials only
    double expected_mean_retries = 0.0;
    double retries_sigma = 0.0;      // standard error of the mean
    std::vector<int> retry_histogram;  // index = retries, successful trials
};

// Per-trial seeds come from std::seed_seq{seed, trial}; trials run on
// `threads` workers (0 = hardware concurrency), results are independent of
// the thread count.
MonteCarloStats run_monte_carlo(const ProtocolConfig& cfg, int trials, unsigned threads = 0);

void write_events_csv(std::ostream& os, const std::vector<ProtocolEvent>& events);

}  // namespace lpoint
