#include "strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockeig {

double slope(const std::vector<double>& log10_r) {
    if (log10_r.size() < 2) throw std::invalid_argument("slope: need at least two residuals");
    return log10_r[log10_r.size() - 2] - log10_r.back();
}

double slope_avg(const std::vector<double>& log10_r, int j_p) {
    if (j_p < 1) throw std::invalid_argument("slope_avg: window must be positive");
    if (log10_r.size() < static_cast<size_t>(j_p) + 1)
        throw std::invalid_argument("slope_avg: insufficient history");
    return (log10_r[log10_r.size() - 1 - j_p] - log10_r.back()) / j_p;
}

void validate(const StrategyConfig& cfg) {
    if (cfg.kind == StrategyKind::none) return;
    if (cfg.j_s < 1 || cfg.j_s >= cfg.j_e)
        throw std::invalid_argument("strategy: need 1 <= j_s < j_e");
    if (cfg.j_p < 1) throw std::invalid_argument("strategy: j_p must be positive");
    if (!(cfg.mu > 0)) throw std::invalid_argument("strategy: mu must be positive");
    if (cfg.j_warm < 0) throw std::invalid_argument("strategy: j_warm must be nonnegative");
    if (!(cfg.r_warm > 0)) throw std::invalid_argument("strategy: r_warm must be positive");
}

namespace {

void note_shrink(StrategyState& st) {
    st.have_cmax = false;
    st.c_max = 0.0;
}

void note_expand(StrategyState& st) { st.last_expand_iter = st.j; }

}  // namespace

Decision decide(StrategyState& st, const StrategyConfig& cfg, double r_now, int n_es, int n_ex) {
    ++st.j;
    st.log10_r.push_back(std::log10(std::max(r_now, 1e-300)));
    if (cfg.kind == StrategyKind::none) return Decision::hold;

    const bool expanded = st.n_now >= n_ex;
    if (!st.shrunk_once) {
        if (expanded && st.j >= cfg.j_warm && r_now <= cfg.r_warm) {
            st.shrunk_once = true;
            note_shrink(st);
            return Decision::shrink;
        }
        return Decision::hold;
    }

    if (cfg.kind == StrategyKind::fix) {
        if (!expanded && st.n_now <= n_es && st.j % cfg.j_e == 0) {
            note_expand(st);
            return Decision::expand;
        }
        if (expanded && (st.j - cfg.j_s) % cfg.j_e == 0) {
            note_shrink(st);
            return Decision::shrink;
        }
        return Decision::hold;
    }

    // slope / slopek
    if (!expanded && st.n_now <= n_es) {
        double c;
        if (cfg.kind == StrategyKind::slope) {
            if (st.log10_r.size() < 2) return Decision::hold;
            c = slope(st.log10_r);
        } else {
            if (st.log10_r.size() < static_cast<size_t>(cfg.j_p) + 1) return Decision::hold;
            c = slope_avg(st.log10_r, cfg.j_p);
        }
        if (!st.have_cmax) {
            // first slope after a shrink seeds the reference, even if negative
            st.c_max = c;
            st.have_cmax = true;
            return Decision::hold;
        }
        const bool want_expand = c > 0.0 ? st.c_max > cfg.mu * c : st.c_max > 0.0;
        if (want_expand) {
            note_expand(st);
            return Decision::expand;
        }
        st.c_max = std::max(st.c_max, c);
        return Decision::hold;
    }
    if (expanded && st.last_expand_iter >= 0 && st.j - st.last_expand_iter == cfg.j_s) {
        note_shrink(st);
        return Decision::shrink;
    }
    return Decision::hold;
}

}  // namespace blockeig
