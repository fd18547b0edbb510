#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace slicesim::radio {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Slow channel gain (pathloss + one frozen shadowing draw per cell) on a
// regular grid. Negative dB values are losses. Read-only after construction.
class RadioMap {
  public:
    struct Params {
        Position bs;                     // transmitter location
        double radius_m = 500.0;         // half-extent of the square grid
        double cell_m = 1.0;             // grid resolution
        double pathloss_a = 128.1;       // a + b*log10(d_km)
        double pathloss_b = 37.6;
        double shadowing_sigma_db = 8.0; // lognormal shadowing, frozen per cell
        double min_distance_m = 10.0;    // clamp to avoid the near-field singularity
        std::uint64_t seed = 0;
    };

    RadioMap() = default;
    static RadioMap build(const Params& p);

    // Nearest-cell lookup, no interpolation. Throws on out-of-bounds.
    double gain_at(const Position& pos) const;
    bool contains(const Position& pos) const;

    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }
    double cell_m() const { return cell_m_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<double>& gains() const { return gains_; }

    // CSV grid with a one-line header (origin, cell size, rows, cols).
    void export_csv(std::ostream& os) const;
    static RadioMap import_csv(std::istream& is);

  private:
    double origin_x_ = 0.0, origin_y_ = 0.0;
    double cell_m_ = 1.0;
    int rows_ = 0, cols_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> gains_;  // row-major, rows_ * cols_
};

// Deterministic pathloss in dB at distance d meters (no shadowing).
double pathloss_db(double d_m, double a, double b, double min_distance_m);

struct LinkBudget {
    double tx_power_dbm = 43.0;
    double noise_per_rb_dbm = -121.45;
    int total_rbs = 100;
    double rb_bandwidth_hz = 180e3;

    double total_noise_dbm() const {
        return noise_per_rb_dbm + 10.0 * std::log10(static_cast<double>(total_rbs));
    }
};

struct ShortPacketParams {
    double error_prob = 1e-5;
    int symbols_per_rb_tti = 168;
};

// Wideband SINR, linear scale.
double sinr(const LinkBudget& lb, double gain_db);
double sinr_db(const LinkBudget& lb, double gain_db);

// Shannon rate in bits/s.
double rate_long(double bandwidth_hz, double sinr_linear);

// Finite-blocklength rate in bits/s, floored at zero.
double rate_short(double bandwidth_hz, double sinr_linear, double blocklength_symbols,
                  const ShortPacketParams& sp);

// Mean spectrum efficiency over a window, bps/Hz per TTI.
double window_se(const std::vector<double>& per_tti_sum_rates_bps,
                 double total_bandwidth_hz, int ttis);

// Inverse of the Gaussian Q-function, |error| < 1e-9 over (0, 0.5).
double q_inv(double eps);

}  // namespace slicesim::radio
