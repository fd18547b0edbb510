#include "slicesim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "slicesim/rng.hpp"

namespace slicesim::radio {

namespace {

constexpr double kLog2E = 1.4426950408889634;

// Inverse standard normal CDF: Acklam's rational approximation followed by
// one Halley step against erfc, good to ~1e-15 over (0,1).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p outside (0,1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};

    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement: e = Phi(x) - p.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

}  // namespace

double q_inv(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("q_inv: eps outside (0,0.5)");
    return -normal_quantile(eps);
}

double pathloss_db(double d_m, double a, double b, double min_distance_m) {
    const double d = std::max(d_m, min_distance_m);
    return a + b * std::log10(d / 1000.0);
}

RadioMap RadioMap::build(const Params& p) {
    RadioMap m;
    m.cell_m_ = p.cell_m;
    m.seed_ = p.seed;
    const int half = static_cast<int>(std::ceil(p.radius_m / p.cell_m));
    m.rows_ = 2 * half;
    m.cols_ = 2 * half;
    m.origin_x_ = p.bs.x - half * p.cell_m;
    m.origin_y_ = p.bs.y - half * p.cell_m;
    m.gains_.resize(static_cast<std::size_t>(m.rows_) * m.cols_);

    Rng shadow(splitmix64(p.seed ^ 0x5c1ce5ULL));
    std::size_t idx = 0;
    for (int r = 0; r < m.rows_; ++r) {
        const double cy = m.origin_y_ + (r + 0.5) * p.cell_m;
        for (int c = 0; c < m.cols_; ++c, ++idx) {
            const double cx = m.origin_x_ + (c + 0.5) * p.cell_m;
            const double d = distance({cx, cy}, p.bs);
            const double pl = pathloss_db(d, p.pathloss_a, p.pathloss_b, p.min_distance_m);
            const double sh = p.shadowing_sigma_db > 0.0
                                  ? shadow.normal(0.0, p.shadowing_sigma_db)
                                  : 0.0;
            m.gains_[idx] = -pl + sh;
        }
    }
    return m;
}

bool RadioMap::contains(const Position& pos) const {
    const double fx = (pos.x - origin_x_) / cell_m_;
    const double fy = (pos.y - origin_y_) / cell_m_;
    return fx >= 0.0 && fy >= 0.0 && fx < cols_ && fy < rows_;
}

double RadioMap::gain_at(const Position& pos) const {
    const int c = static_cast<int>(std::floor((pos.x - origin_x_) / cell_m_));
    const int r = static_cast<int>(std::floor((pos.y - origin_y_) / cell_m_));
    if (r < 0 || c < 0 || r >= rows_ || c >= cols_)
        throw std::out_of_range("radio map: position outside coverage");
    return gains_[static_cast<std::size_t>(r) * cols_ + c];
}

void RadioMap::export_csv(std::ostream& os) const {
    os.precision(17);
    os << "origin_x,origin_y,cell_size,rows,cols\n";
    os << origin_x_ << ',' << origin_y_ << ',' << cell_m_ << ',' << rows_ << ','
       << cols_ << '\n';
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            if (c) os << ',';
            os << gains_[static_cast<std::size_t>(r) * cols_ + c];
        }
        os << '\n';
    }
}

RadioMap RadioMap::import_csv(std::istream& is) {
    RadioMap m;
    std::string line;
    if (!std::getline(is, line) || line.rfind("origin_x", 0) != 0)
        throw std::runtime_error("radio map: bad header");
    if (!std::getline(is, line)) throw std::runtime_error("radio map: truncated");
    {
        std::istringstream ss(line);
        char comma;
        ss >> m.origin_x_ >> comma >> m.origin_y_ >> comma >> m.cell_m_ >> comma >>
            m.rows_ >> comma >> m.cols_;
        if (!ss || m.rows_ <= 0 || m.cols_ <= 0)
            throw std::runtime_error("radio map: bad dimensions");
    }
    m.gains_.reserve(static_cast<std::size_t>(m.rows_) * m.cols_);
    for (int r = 0; r < m.rows_; ++r) {
        if (!std::getline(is, line)) throw std::runtime_error("radio map: truncated grid");
        std::istringstream ss(line);
        std::string cell;
        for (int c = 0; c < m.cols_; ++c) {
            if (!std::getline(ss, cell, ',')) throw std::runtime_error("radio map: short row");
            m.gains_.push_back(std::stod(cell));
        }
    }
    return m;
}

double sinr_db(const LinkBudget& lb, double gain_db) {
    if (!std::isfinite(gain_db)) throw std::invalid_argument("sinr: non-finite gain");
    return lb.tx_power_dbm + gain_db - lb.total_noise_dbm();
}

double sinr(const LinkBudget& lb, double gain_db) {
    return std::pow(10.0, sinr_db(lb, gain_db) / 10.0);
}

double rate_long(double bandwidth_hz, double sinr_linear) {
    return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

double rate_short(double bandwidth_hz, double sinr_linear, double blocklength_symbols,
                  const ShortPacketParams& sp) {
    if (sinr_linear <= 0.0) return 0.0;
    const double one_plus = 1.0 + sinr_linear;
    const double dispersion = 1.0 - 1.0 / (one_plus * one_plus);
    const double penalty = std::sqrt(dispersion / blocklength_symbols) *
                           q_inv(sp.error_prob) * kLog2E;
    const double r = bandwidth_hz * (std::log2(one_plus) - penalty);
    return std::max(0.0, r);
}

double window_se(const std::vector<double>& per_tti_sum_rates_bps,
                 double total_bandwidth_hz, int ttis) {
    double acc = 0.0;
    for (double r : per_tti_sum_rates_bps) acc += r;
    return acc / total_bandwidth_hz / static_cast<double>(ttis);
}

}  // namespace slicesim::radio
