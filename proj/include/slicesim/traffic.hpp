#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "slicesim/rng.hpp"

namespace slicesim::traffic {

struct Packet {
    int ue_id = -1;
    std::int64_t arrival_tti = 0;
    double size_bits = 0.0;
    double remaining_bits = 0.0;
    std::int64_t deadline_tti = -1;  // -1: no deadline
};

// Per-UE FCFS queue with delivery/drop accounting. Window counters are reset
// by the caller at slicing-window boundaries.
struct FlowQueue {
    int ue_id = -1;
    int slice_id = -1;
    std::deque<Packet> packets;

    std::int64_t generated = 0;
    std::int64_t delivered = 0;
    std::int64_t dropped = 0;
    std::int64_t delivered_within_deadline = 0;

    std::int64_t window_delivered = 0;
    std::int64_t window_dropped = 0;
    std::int64_t window_within_deadline = 0;
    double window_bits_served = 0.0;

    double backlog_bits = 0.0;

    void push(Packet pkt) {
        backlog_bits += pkt.remaining_bits;
        packets.push_back(std::move(pkt));
        ++generated;
    }

    void reset_window() {
        window_delivered = 0;
        window_dropped = 0;
        window_within_deadline = 0;
        window_bits_served = 0.0;
    }

    bool backlogged() const { return !packets.empty(); }
    std::int64_t head_deadline() const { return packets.front().deadline_tti; }
};

// Drains up to bits_served from the queue in FCFS order at TTI `tti`.
// Packets older than max_delay_ttis are dropped first (max_delay_ttis < 0
// disables expiry). A packet finishing at TTI t has delay t - arrival + 1.
void serve_and_account(FlowQueue& q, double bits_served, std::int64_t tti,
                       std::int64_t max_delay_ttis);

struct UrllcParams {
    double packet_bits = 256.0;
    int period_ttis = 10;
    int max_delay_ttis = 5;
};

struct UrllcSource {
    int ue_id = -1;
    int phase_ttis = 0;  // drawn once per UE
};

// One fixed-size packet per UE every period, offset by the UE phase.
std::vector<Packet> generate_urllc(std::int64_t tti, const std::vector<UrllcSource>& ues,
                                   const UrllcParams& params);

// Window-indexed demand per UE, in bits.
class TrafficTrace {
  public:
    void set(int window, int ue_id, double bits);
    // throws "trace exhausted" when the entry is missing
    double demand(int window, int ue_id) const;
    bool has(int window, int ue_id) const;

    void export_csv(std::ostream& os) const;
    static TrafficTrace import_csv(std::istream& is);

  private:
    static std::uint64_t key(int window, int ue_id) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(window)) << 32) |
               static_cast<std::uint32_t>(ue_id);
    }
    std::unordered_map<std::uint64_t, double> demands_;
};

struct SynthTraceParams {
    double base_bits = 5e6;
    double amp_bits = 1e6;
    double period_windows = 200.0;
    double ar_phi = 0.8;
    double ar_sigma_bits = 2e5;
};

// Sinusoid with per-UE phase plus AR(1) noise, clipped at zero.
TrafficTrace synth_embb_trace(const std::vector<int>& ue_ids, int windows,
                              const SynthTraceParams& params, Rng& rng);

// Splits a window demand into packets of at most packet_bits, spread evenly
// over the window's TTIs. The final packet carries the remainder.
std::vector<Packet> packetize_embb(int ue_id, double demand_bits, double packet_bits,
                                   std::int64_t window_start_tti, int window_ttis);

// Same, reading the demand from the trace (throws if the entry is missing).
std::vector<Packet> generate_embb(int window, const TrafficTrace& trace,
                                  const std::vector<int>& ue_ids, double packet_bits,
                                  std::int64_t window_start_tti, int window_ttis);

}  // namespace slicesim::traffic
