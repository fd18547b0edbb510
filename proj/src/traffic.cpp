#include "slicesim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace slicesim::traffic {

void serve_and_account(FlowQueue& q, double bits_served, std::int64_t tti,
                       std::int64_t max_delay_ttis) {
    if (bits_served < 0.0) throw std::invalid_argument("serve_and_account: negative bits");

    if (max_delay_ttis >= 0) {
        while (!q.packets.empty() &&
               tti - q.packets.front().arrival_tti + 1 > max_delay_ttis) {
            q.backlog_bits -= q.packets.front().remaining_bits;
            q.packets.pop_front();
            ++q.dropped;
            ++q.window_dropped;
        }
    }

    double budget = bits_served;
    while (budget > 0.0 && !q.packets.empty()) {
        Packet& p = q.packets.front();
        const double tx = std::min(budget, p.remaining_bits);
        p.remaining_bits -= tx;
        q.backlog_bits -= tx;
        q.window_bits_served += tx;
        budget -= tx;
        if (p.remaining_bits <= 1e-9) {
            const std::int64_t delay = tti - p.arrival_tti + 1;
            ++q.delivered;
            ++q.window_delivered;
            if (max_delay_ttis < 0 || delay <= max_delay_ttis) {
                ++q.delivered_within_deadline;
                ++q.window_within_deadline;
            }
            q.backlog_bits -= p.remaining_bits;
            q.packets.pop_front();
        }
    }
    if (q.backlog_bits < 0.0) q.backlog_bits = 0.0;
}

std::vector<Packet> generate_urllc(std::int64_t tti, const std::vector<UrllcSource>& ues,
                                   const UrllcParams& params) {
    std::vector<Packet> out;
    for (const auto& u : ues) {
        const std::int64_t k = tti - u.phase_ttis;
        if (k >= 0 && k % params.period_ttis == 0) {
            Packet p;
            p.ue_id = u.ue_id;
            p.arrival_tti = tti;
            p.size_bits = params.packet_bits;
            p.remaining_bits = params.packet_bits;
            p.deadline_tti = tti + params.max_delay_ttis;
            out.push_back(p);
        }
    }
    return out;
}

void TrafficTrace::set(int window, int ue_id, double bits) {
    if (bits < 0.0) throw std::invalid_argument("trace: negative demand");
    demands_[key(window, ue_id)] = bits;
}

bool TrafficTrace::has(int window, int ue_id) const {
    return demands_.count(key(window, ue_id)) != 0;
}

double TrafficTrace::demand(int window, int ue_id) const {
    auto it = demands_.find(key(window, ue_id));
    if (it == demands_.end()) throw std::out_of_range("trace exhausted");
    return it->second;
}

void TrafficTrace::export_csv(std::ostream& os) const {
    os << "window,ue_id,bits\n";
    // deterministic order
    std::vector<std::uint64_t> keys;
    keys.reserve(demands_.size());
    for (const auto& [k, v] : demands_) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    os.precision(17);
    for (std::uint64_t k : keys) {
        os << static_cast<int>(k >> 32) << ',' << static_cast<int>(k & 0xffffffffu) << ','
           << demands_.at(k) << '\n';
    }
}

TrafficTrace TrafficTrace::import_csv(std::istream& is) {
    TrafficTrace t;
    std::string line;
    if (!std::getline(is, line) || line.rfind("window", 0) != 0)
        throw std::runtime_error("trace: bad header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string w, u, b;
        if (!std::getline(ss, w, ',') || !std::getline(ss, u, ',') || !std::getline(ss, b))
            throw std::runtime_error("trace: bad row");
        t.set(std::stoi(w), std::stoi(u), std::stod(b));
    }
    return t;
}

TrafficTrace synth_embb_trace(const std::vector<int>& ue_ids, int windows,
                              const SynthTraceParams& params, Rng& rng) {
    TrafficTrace t;
    for (int ue : ue_ids) {
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        double ar = 0.0;
        for (int k = 0; k < windows; ++k) {
            ar = params.ar_phi * ar + (params.ar_sigma_bits > 0.0
                                           ? rng.normal(0.0, params.ar_sigma_bits)
                                           : 0.0);
            const double s =
                params.base_bits +
                params.amp_bits * std::sin(2.0 * M_PI * k / params.period_windows + phase) +
                ar;
            t.set(k, ue, std::max(0.0, s));
        }
    }
    return t;
}

std::vector<Packet> packetize_embb(int ue_id, double demand_bits, double packet_bits,
                                   std::int64_t window_start_tti, int window_ttis) {
    std::vector<Packet> out;
    if (demand_bits <= 0.0) return out;
    const int n = static_cast<int>(std::ceil(demand_bits / packet_bits));
    double left = demand_bits;
    for (int i = 0; i < n; ++i) {
        Packet p;
        p.ue_id = ue_id;
        p.arrival_tti =
            window_start_tti + static_cast<std::int64_t>(i) * window_ttis / n;
        p.size_bits = std::min(packet_bits, left);
        p.remaining_bits = p.size_bits;
        p.deadline_tti = -1;
        left -= p.size_bits;
        out.push_back(p);
    }
    return out;
}

std::vector<Packet> generate_embb(int window, const TrafficTrace& trace,
                                  const std::vector<int>& ue_ids, double packet_bits,
                                  std::int64_t window_start_tti, int window_ttis) {
    std::vector<Packet> out;
    for (int ue : ue_ids) {
        auto pkts = packetize_embb(ue, trace.demand(window, ue), packet_bits,
                                   window_start_tti, window_ttis);
        out.insert(out.end(), pkts.begin(), pkts.end());
    }
    return out;
}

}  // namespace slicesim::traffic
