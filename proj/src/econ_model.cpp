#include "islm/econ_model.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "islm/threads.hpp"

namespace islm {

namespace {

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

// Antiderivative of (t-p)(t-q), anchored so it vanishes at p. Anchoring keeps
// the money functions at moderate magnitudes around the operative band.
double cubic_primitive(double i, double p, double q) {
    auto raw = [&](double t) { return t * t * t / 3.0 - 0.5 * (p + q) * t * t + p * q * t; };
    return raw(i) - raw(p);
}

void fail(const std::string& what) { throw std::invalid_argument(what); }

} // namespace

std::string to_string(Regime r) {
    switch (r) {
    case Regime::OriginalDegenerate: return "original_degenerate";
    case Regime::KaldorGoods: return "kaldor_goods";
    case Regime::ThreePhaseMoney: return "three_phase_money";
    }
    return "?";
}

std::string to_string(FastSide f) {
    return f == FastSide::Goods ? "goods" : "money";
}

State::State(double y_, double r_) : y(y_), r(r_) {
    if (!(y_ >= 0.0))
        throw std::domain_error("State: Y must be >= 0, got " + std::to_string(y_));
}

double GridSpec::y_at(std::size_t i) const {
    return y_min + (y_max - y_min) * static_cast<double>(i) / static_cast<double>(ny - 1);
}

double GridSpec::r_at(std::size_t j) const {
    return r_min + (r_max - r_min) * static_cast<double>(j) / static_cast<double>(nr - 1);
}

GridSpec default_grid(const ModelConfig& cfg) {
    GridSpec g;
    if (cfg.regime == Regime::ThreePhaseMoney)
        g.r_min = 0.0; // keeps i_S positive over the grid
    return g;
}

void ModelConfig::validate() const {
    if (!(alpha > 0.0)) fail("alpha must be > 0");
    if (!(beta > 0.0)) fail("beta must be > 0");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) fail("epsilon must lie in (0, 1]");
    if (!(m_s > 0.0)) fail("m_s must be > 0");
    if (!(invest.h > 0.0)) fail("invest.h must be > 0");
    if (!(save.s > 0.0 && save.s < 1.0)) fail("save.s must lie in (0, 1)");
    if (!(save.g > 0.0)) fail("save.g must be > 0");
    if (!(demand.l > 0.0)) fail("demand.l must be > 0");
    if (demand.kappa_l < 0.0 || supply.kappa_m < 0.0) fail("kappa coefficients must be >= 0");

    switch (regime) {
    case Regime::KaldorGoods:
        if (!(demand.d > 0.0)) fail("KaldorGoods: demand.d must be > 0");
        if (!(supply.e > 0.0)) fail("KaldorGoods: supply.e must be > 0");
        if (demand.kappa_l != 0.0 || supply.kappa_m != 0.0)
            fail("KaldorGoods: cubic money terms must be zero");
        break;
    case Regime::ThreePhaseMoney:
        if (!(demand.p < demand.q)) fail("ThreePhaseMoney: requires p < q");
        if (!(demand.kappa_l > 0.0 && supply.kappa_m > 0.0))
            fail("ThreePhaseMoney: kappa_l and kappa_m must be > 0");
        if (demand.d != 0.0 || supply.e != 0.0)
            fail("ThreePhaseMoney: d and e must be zero so the slopes vanish exactly at p, q");
        break;
    case Regime::OriginalDegenerate:
        if (mp != 0.0 || pi_e != 0.0) fail("OriginalDegenerate: mp and pi_e must be zero");
        if (supply.m != 0.0 || supply.e != 0.0 || supply.kappa_m != 0.0 || demand.kappa_l != 0.0)
            fail("OriginalDegenerate: endogenous money side must be identically zero");
        if (!(demand.d > 0.0)) fail("OriginalDegenerate: demand.d must be > 0");
        break;
    }
}

double short_rate(double r, const ModelConfig& cfg) { return r - cfg.mp + cfg.pi_e; }

double phi_prime(double i_s, const ModelConfig& cfg) {
    if (cfg.regime == Regime::ThreePhaseMoney)
        return -cfg.demand.kappa_l * (i_s - cfg.demand.p) * (i_s - cfg.demand.q);
    return -cfg.demand.d;
}

double psi_prime(double i_s, const ModelConfig& cfg) {
    if (cfg.regime == Regime::ThreePhaseMoney)
        return cfg.supply.kappa_m * (i_s - cfg.demand.p) * (i_s - cfg.demand.q);
    return cfg.supply.e;
}

FunctionValues eval_at(double y, double r, const ModelConfig& cfg) {
    const auto& iv = cfg.invest;
    const auto& sv = cfg.save;
    const double i_s = short_rate(r, cfg);

    FunctionValues f;
    f.invest = iv.i0 + iv.a * std::tanh(iv.b * (y - iv.ym)) + iv.linear_slope * y - iv.h * r;
    f.saving = sv.s0 + sv.s * y + sv.g * r;

    double phi, psi;
    if (cfg.regime == Regime::ThreePhaseMoney) {
        const double c = cubic_primitive(i_s, cfg.demand.p, cfg.demand.q);
        phi = -cfg.demand.kappa_l * c;
        psi = cfg.supply.kappa_m * c;
    } else {
        phi = -cfg.demand.d * i_s;
        psi = cfg.supply.e * i_s;
    }
    f.demand = cfg.demand.l * y + phi;
    f.supply = cfg.supply.m * y + psi;
    return f;
}

FunctionValues eval_functions(const State& s, const ModelConfig& cfg) {
    return eval_at(s.y, s.r, cfg);
}

Partials partials_at(double y, double r, const ModelConfig& cfg) {
    const auto& iv = cfg.invest;
    const double i_s = short_rate(r, cfg);
    Partials p;
    p.i_y = iv.a * iv.b * sech2(iv.b * (y - iv.ym)) + iv.linear_slope;
    p.i_r = -iv.h;
    p.s_y = cfg.save.s;
    p.s_r = cfg.save.g;
    p.l_y = cfg.demand.l;
    p.l_r = phi_prime(i_s, cfg); // dL/dR == dL/di_S, MP and pi_e constant
    p.m_y = cfg.supply.m;
    p.m_r = psi_prime(i_s, cfg);
    return p;
}

Partials fd_partials_at(double y, double r, const ModelConfig& cfg, double step) {
    const FunctionValues yp = eval_at(y + step, r, cfg);
    const FunctionValues ym = eval_at(y - step, r, cfg);
    const FunctionValues rp = eval_at(y, r + step, cfg);
    const FunctionValues rm = eval_at(y, r - step, cfg);
    const double inv = 1.0 / (2.0 * step);
    Partials p;
    p.i_y = (yp.invest - ym.invest) * inv;
    p.s_y = (yp.saving - ym.saving) * inv;
    p.l_y = (yp.demand - ym.demand) * inv;
    p.m_y = (yp.supply - ym.supply) * inv;
    p.i_r = (rp.invest - rm.invest) * inv;
    p.s_r = (rp.saving - rm.saving) * inv;
    p.l_r = (rp.demand - rm.demand) * inv;
    p.m_r = (rp.supply - rm.supply) * inv;
    return p;
}

namespace {

// Inner phase of the three-phase regime, with the boundaries excluded.
bool in_inner_phase(double i_s, const ModelConfig& cfg) {
    return i_s > cfg.demand.p && i_s < cfg.demand.q;
}

bool near_phase_boundary(double i_s, const ModelConfig& cfg, double tol = 1e-9) {
    return std::abs(i_s - cfg.demand.p) < tol || std::abs(i_s - cfg.demand.q) < tol;
}

void check_node(const ModelConfig& cfg, double y, double r, std::vector<Violation>& out) {
    const Partials cf = partials_at(y, r, cfg);
    const Partials fd = fd_partials_at(y, r, cfg);
    const double i_s = short_rate(r, cfg);

    auto add = [&](const char* id, double observed) { out.push_back({id, y, r, observed}); };

    // Finite differences must reproduce the closed forms (relative, floor 1).
    auto fd_ok = [&](double a, double b) {
        return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b));
    };
    const double cfv[8] = {cf.i_y, cf.i_r, cf.s_y, cf.s_r, cf.l_y, cf.l_r, cf.m_y, cf.m_r};
    const double fdv[8] = {fd.i_y, fd.i_r, fd.s_y, fd.s_r, fd.l_y, fd.l_r, fd.m_y, fd.m_r};
    for (int k = 0; k < 8; ++k)
        if (!fd_ok(fdv[k], cfv[k])) add("fd", fdv[k] - cfv[k]);

    // (3) and (4) hold in every regime.
    if (!(cf.i_y > 0.0 && cf.i_y < 1.0)) add("3", cf.i_y);
    if (!(cf.i_r < 0.0)) add("3", cf.i_r);
    if (!(cf.s_y > 0.0 && cf.s_y < 1.0)) add("4", cf.s_y);
    if (!(cf.s_r > 0.0)) add("4", cf.s_r);

    if (!(cf.l_y > 0.0)) add("5", cf.l_y);

    switch (cfg.regime) {
    case Regime::OriginalDegenerate:
        if (!(cf.l_r < 0.0)) add("5", cf.l_r);
        break;
    case Regime::KaldorGoods:
        if (!(cf.l_r < 0.0)) add("5", cf.l_r);
        if (!(cf.m_y > 0.0 && cf.m_y < cf.l_y)) add("10", cf.m_y);
        if (!(cf.m_r > 0.0)) add("11", cf.m_r);
        break;
    case Regime::ThreePhaseMoney:
        if (!(cf.m_y > 0.0 && cf.m_y < cf.l_y)) add("10", cf.m_y);
        if (!(cf.i_y < cf.s_y)) add("12", cf.i_y - cf.s_y);
        if (near_phase_boundary(i_s, cfg)) {
            if (cf.l_r != 0.0) add("19", cf.l_r);
            if (cf.m_r != 0.0) add("20", cf.m_r);
        } else if (in_inner_phase(i_s, cfg)) {
            if (!(cf.l_r > 0.0)) add("19", cf.l_r);
            if (!(cf.m_r < 0.0)) add("20", cf.m_r);
        } else {
            if (!(cf.l_r < 0.0)) add("5", cf.l_r);
            if (!(cf.m_r > 0.0)) add("11", cf.m_r);
        }
        break;
    }
}

// First R at which f changes sign, scanning upward; bisected to ~1e-12.
template <typename F>
std::optional<double> first_root_in_r(F&& f, double r_lo, double r_hi, std::size_t steps) {
    double prev_r = r_lo;
    double prev_f = f(r_lo);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double r = r_lo + (r_hi - r_lo) * static_cast<double>(k) / static_cast<double>(steps);
        const double fr = f(r);
        if (prev_f == 0.0) return prev_r;
        if (prev_f * fr < 0.0) {
            double a = prev_r, b = r, fa = prev_f;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fm == 0.0 || (b - a) < 1e-13) return m;
                if (fa * fm < 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            return 0.5 * (a + b);
        }
        prev_r = r;
        prev_f = fr;
    }
    return std::nullopt;
}

} // namespace

std::optional<double> is_curve_r(double y, const ModelConfig& cfg) {
    auto f = [&](double r) {
        const FunctionValues v = eval_at(y, r, cfg);
        return v.invest - v.saving;
    };
    // I - S is strictly decreasing in R (h + g > 0): expand a bracket around 0.
    double lo = -1.0, hi = 1.0;
    for (int k = 0; k < 60 && f(lo) < 0.0; ++k) lo *= 2.0;
    for (int k = 0; k < 60 && f(hi) > 0.0; ++k) hi *= 2.0;
    if (f(lo) < 0.0 || f(hi) > 0.0) return std::nullopt;
    return first_root_in_r(f, lo, hi, 1);
}

std::optional<double> lm_curve_r(double y, const ModelConfig& cfg) {
    auto f = [&](double r) {
        const FunctionValues v = eval_at(y, r, cfg);
        return v.demand - v.supply - cfg.m_s;
    };
    // Lowest root; the cubic regime can hold up to three. L - M -> +inf as
    // R -> -inf and -> -inf as R -> +inf in every regime, so bracket both ends
    // and scan upward for the first sign change.
    double lo = -1.0;
    for (int k = 0; k < 200 && f(lo) <= 0.0; ++k) lo = lo * 2.0 - 1.0;
    if (f(lo) <= 0.0) return std::nullopt;
    double hi = 1.0;
    for (int k = 0; k < 200 && f(hi) >= 0.0; ++k) hi = hi * 2.0 + 1.0;
    if (f(hi) >= 0.0) return std::nullopt;
    return first_root_in_r(f, lo, hi, 8192);
}

ConditionReport verify_conditions(const ModelConfig& cfg, const GridSpec& grid) {
    if (grid.ny < 2 || grid.nr < 2)
        throw std::invalid_argument("verify_conditions: grid needs at least 2 nodes per axis");
    if (!(grid.y_min >= 0.0))
        throw std::invalid_argument("verify_conditions: grid must start at Y >= 0");
    if (cfg.regime == Regime::ThreePhaseMoney && !(short_rate(grid.r_min, cfg) > 0.0))
        throw std::invalid_argument("verify_conditions: three-phase grid requires i_S > 0");

    ConditionReport rep;
    rep.regime = cfg.regime;
    rep.grid = grid;

    // Rows are independent; chunk them across workers and merge in row order.
    const std::size_t nw = worker_count();
    std::vector<std::future<std::vector<Violation>>> futs;
    const std::size_t rows_per = (grid.ny + nw - 1) / nw;
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t i0 = w * rows_per;
        const std::size_t i1 = std::min(grid.ny, i0 + rows_per);
        if (i0 >= i1) break;
        futs.push_back(std::async(std::launch::async, [&, i0, i1] {
            std::vector<Violation> local;
            for (std::size_t i = i0; i < i1; ++i)
                for (std::size_t j = 0; j < grid.nr; ++j)
                    check_node(cfg, grid.y_at(i), grid.r_at(j), local);
            return local;
        }));
    }
    for (auto& f : futs) {
        auto v = f.get();
        rep.violations.insert(rep.violations.end(), v.begin(), v.end());
    }

    if (cfg.regime == Regime::KaldorGoods) {
        try {
            const auto xz = kaldor_interval(cfg, 0.5 * (grid.r_min + grid.r_max));
            rep.kaldor_interval = xz;
            // (16): slope difference changes sign exactly at X and Z.
            const double mid = 0.5 * (xz.first + xz.second);
            auto slope_diff = [&](double y) {
                const Partials p = partials_at(y, 0.0, cfg);
                return p.i_y - p.s_y;
            };
            if (!(slope_diff(std::max(grid.y_min, xz.first - 0.5)) < 0.0))
                rep.violations.push_back({"16", xz.first - 0.5, 0.0, slope_diff(xz.first - 0.5)});
            if (!(slope_diff(mid) > 0.0))
                rep.violations.push_back({"16", mid, 0.0, slope_diff(mid)});
            if (!(slope_diff(std::min(grid.y_max, xz.second + 0.5)) < 0.0))
                rep.violations.push_back({"16", xz.second + 0.5, 0.0, slope_diff(xz.second + 0.5)});
        } catch (const NoKaldorInterval&) {
            rep.violations.push_back({"16", 0.0, 0.0, 0.0});
        }
    }

    const auto r_is = is_curve_r(kIntersectionProbeY, cfg);
    const auto r_lm = lm_curve_r(kIntersectionProbeY, cfg);
    rep.intersection_ok = r_is.has_value() && r_lm.has_value() && *r_is > *r_lm;
    if (!rep.intersection_ok)
        rep.violations.push_back({"13", kIntersectionProbeY,
                                  r_is.value_or(0.0) - r_lm.value_or(0.0), 0.0});
    return rep;
}

std::pair<double, double> kaldor_interval(const ModelConfig& cfg, double r_fixed) {
    (void)r_fixed; // I_Y and S_Y do not depend on R in these families
    const auto& iv = cfg.invest;
    const double peak = iv.a * iv.b + iv.linear_slope;
    if (!(peak > cfg.save.s))
        throw NoKaldorInterval("peak investment slope " + std::to_string(peak) +
                               " does not exceed saving slope " + std::to_string(cfg.save.s));

    auto slope_diff = [&](double y) {
        const Partials p = partials_at(y, r_fixed, cfg);
        return p.i_y - p.s_y;
    };
    if (!(slope_diff(iv.ym) > 0.0))
        throw NoKaldorInterval("no positive hump at the sigmoid center");

    // Bracket both roots around the sigmoid center, then bisect.
    auto bisect = [&](double lo, double hi) {
        double flo = slope_diff(lo);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = slope_diff(mid);
            if (std::abs(hi - lo) < 1e-12) break;
            if (flo * fm <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        return 0.5 * (lo + hi);
    };

    double left = iv.ym, span = 1.0 / std::max(iv.b, 1e-6);
    while (slope_diff(left - span) > 0.0 && span < 1e8) span *= 2.0;
    if (span >= 1e8) throw NoKaldorInterval("lower slope root not bracketed");
    const double x = bisect(left - span, left);
    const double z = bisect(left, left + span);
    if (!(x < z)) throw NoKaldorInterval("degenerate tangency");
    return {x, z};
}

} // namespace islm
