#include "solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blockeig {

namespace {

DenseBlock hcat(const DenseBlock& a, const DenseBlock& b) {
    if (a.cols() == 0) return b;
    if (b.cols() == 0) return a;
    DenseBlock out(a.rows(), a.cols() + b.cols());
    out.leftCols(a.cols()) = a;
    out.rightCols(b.cols()) = b;
    return out;
}

RitzSet take_leading(const RitzSet& r, int m) {
    return {r.values.head(m), r.vectors.leftCols(m), r.coeffs.leftCols(m)};
}

// Tallies work units around the kernel calls.
struct Meter {
    WorkUnits w;
    std::int64_t rr_flops = 0;
    int iter_rr_dim = 0;

    void begin_iteration() { iter_rr_dim = 0; }

    DenseBlock spmv(const SparseSym& a, const DenseBlock& x) {
        w.spmv_cols += x.cols();
        return spmv_block(a, x);
    }
    DenseBlock residual(const SparseSym& a, const RitzSet& ritz) {
        w.spmv_cols += ritz.vectors.cols();
        return residual_block(a, ritz);
    }
    DenseBlock solve(const SpdFactor& f, const DenseBlock& b) {
        w.solve_cols += b.cols();
        return f.solve(b);
    }
    OrthoResult ortho(const DenseBlock& x) {
        w.ortho_flops += x.rows() * x.cols() * x.cols();
        return orthonormalize(x);
    }
    OrthoResult proj_ortho(const DenseBlock& x, const DenseBlock& q) {
        w.ortho_flops += x.rows() * x.cols() * (2 * q.cols() + x.cols());
        return project_orthonormalize(x, q);
    }
    RitzSet rr(const SparseSym& a, const DenseBlock& s) {
        const std::int64_t n = s.rows(), d = s.cols();
        w.spmv_cols += d;
        rr_flops += 2 * n * d * d + d * d * d;
        iter_rr_dim = static_cast<int>(d);
        return rayleigh_ritz(a, s);
    }
};

// Exactly `count` orthonormal random directions orthogonal to vs (rank
// collapse recovery).
DenseBlock fresh_cols(int count, const DenseBlock& vs, std::mt19937_64& rng, Meter& m) {
    DenseBlock acc(vs.rows(), 0);
    for (int attempt = 0; acc.cols() < count && attempt < 8; ++attempt) {
        DenseBlock extra = random_block(static_cast<int>(vs.rows()),
                                        count - static_cast<int>(acc.cols()), rng);
        OrthoResult o = m.proj_ortho(extra, hcat(vs, acc));
        if (o.kept > 0) acc = hcat(acc, o.q);
    }
    if (acc.cols() < count) throw std::runtime_error("block rank collapsed beyond recovery");
    return acc;
}

DenseBlock refill(DenseBlock q, int want, std::mt19937_64& rng, Meter& m) {
    if (q.cols() >= want) return q;
    DenseBlock extra = fresh_cols(want - static_cast<int>(q.cols()), q, rng, m);
    return hcat(q, extra);
}

DenseBlock initial_block(const SparseSym& a, int n_ex, const DenseBlock* x0, std::mt19937_64& rng,
                         Meter& m) {
    DenseBlock x;
    if (x0 != nullptr) {
        if (x0->rows() != a.rows() || x0->cols() != n_ex)
            throw std::invalid_argument("initial block must be n x n_ex");
        x = *x0;
    } else {
        x = random_block(a.rows(), n_ex, rng);
    }
    OrthoResult o = m.ortho(x);
    if (x0 != nullptr && o.kept < n_ex)
        throw std::invalid_argument("initial block is rank deficient");
    return refill(o.q, n_ex, rng, m);
}

Vector make_precond(const SparseSym& a, Precond p) {
    if (p == Precond::identity) return Vector();
    Vector t(a.rows());
    for (int i = 0; i < a.rows(); ++i) t[i] = 1.0 / std::max(std::fabs(a.diagonal(i)), 1e-12);
    return t;
}

DenseBlock apply_precond(const Vector& t, const DenseBlock& r) {
    return t.size() == 0 ? r : DenseBlock(t.asDiagonal() * r);
}

void push_record(SolveResult& out, int j, double overall, int n_now, IterEvent ev, int lock_count,
                 const Meter& m) {
    ConvergenceRecord rec{j, overall, n_now, ev, lock_count, m.w};
    rec.work.rr_dim = m.iter_rr_dim;
    out.history.push_back(rec);
}

SolveResult finish(SolveResult out, SolveStatus status, const RitzSet& ritz, int n_ev,
                   const Meter& m) {
    out.status = status;
    out.values = ritz.values.head(n_ev);
    out.vectors = ritz.vectors.leftCols(n_ev);
    out.iterations = static_cast<int>(out.history.size());
    out.work = m.w;
    out.work.rr_dim = m.iter_rr_dim;
    out.rr_flops = m.rr_flops;
    return out;
}

// Tracks whether the residual stopped making progress: stagnated once 50
// iterations pass without an improvement of at least 0.01 decades.
struct StagnationGuard {
    double mark = std::numeric_limits<double>::infinity();
    int mark_iter = 0;

    bool update(int j, double overall) {
        const double lg = std::log10(std::max(overall, 1e-300));
        if (lg <= mark - 0.01) {
            mark = lg;
            mark_iter = j;
            return false;
        }
        return j - mark_iter >= 50;
    }
};

}  // namespace

SolverConfig resolve_config(SolverConfig cfg, SolverKind kind, const StrategyConfig& scfg, int n) {
    if (n < 1) throw std::invalid_argument("matrix is empty");
    if (cfg.n_ev < 1) throw std::invalid_argument("n_ev must be positive");
    if (cfg.n_ev > n) throw std::invalid_argument("n_ev exceeds the matrix dimension");
    if (cfg.n_ex == 0) {
        const double mult = kind == SolverKind::lobpcg ? 1.5 : 2.0;
        cfg.n_ex = std::min(n, static_cast<int>(std::ceil(mult * cfg.n_ev)));
    }
    const bool nes_given = cfg.n_es != 0;
    if (!nes_given) cfg.n_es = std::max(cfg.n_ev, std::min(cfg.n_ev + 5, cfg.n_ex - 1));
    if (cfg.n_ex < cfg.n_ev || cfg.n_ex > n)
        throw std::invalid_argument("need n_ev <= n_ex <= n");
    const bool se_active = scfg.kind != StrategyKind::none;
    if ((se_active || nes_given) && !(cfg.n_ev <= cfg.n_es && cfg.n_es < cfg.n_ex))
        throw std::invalid_argument("need n_ev <= n_es < n_ex");
    if (!(cfg.tol > 0)) throw std::invalid_argument("tol must be positive");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
    if (cfg.cg_iters < 1) throw std::invalid_argument("cg_iters must be positive");
    if (cfg.expand_mode == ExpandMode::powered_x_drop && kind != SolverKind::si)
        throw std::invalid_argument("powered expansion vectors require the SI solver");
    validate(scfg);
    return cfg;
}

std::vector<int> soft_lock(const ResidualReport& report, double tol) {
    int m = 0;
    const int total = static_cast<int>(report.per_pair.size());
    while (m < total && report.per_pair[m] <= tol) ++m;
    std::vector<int> active;
    active.reserve(total - m);
    for (int i = m; i < total; ++i) active.push_back(i);
    return active;
}

DenseBlock expansion_vectors(ExpandMode mode, const DenseBlock& x_drop, int want,
                             std::mt19937_64& rng, int n) {
    if (mode == ExpandMode::random) return random_block(n, want, rng);
    return x_drop;  // x_drop / powered_x_drop; empty means the expansion is skipped
}

std::pair<DenseBlock, DenseBlock> hl_trick(const DenseBlock& s, const DenseBlock& z, int n_now,
                                           int lock) {
    if (n_now < 1 || n_now > z.cols()) throw std::invalid_argument("hl_trick: bad n_now");
    lock = std::clamp(lock, 0, n_now);
    const DenseBlock z1 = z.leftCols(n_now);
    DenseBlock zp_raw = z.middleCols(lock, n_now - lock);
    zp_raw.topRows(n_now).setZero();
    OrthoResult o = project_orthonormalize(zp_raw, z1);
    return {s * z1, s * o.q};
}

double combined_work(const SolveResult& r, const SparseSym& a) {
    const double nnz = 2.0 * static_cast<double>(a.nnz_lower());
    return (static_cast<double>(r.work.spmv_cols) + static_cast<double>(r.work.solve_cols)) * nnz +
           static_cast<double>(r.work.ortho_flops) + static_cast<double>(r.rr_flops);
}

SolveResult solve_si(const SparseSym& a, const SolverConfig& cfg_in, const StrategyConfig& scfg,
                     const DenseBlock* x0) {
    const SolverConfig cfg = resolve_config(cfg_in, SolverKind::si, scfg, a.rows());
    const SpdFactor fact(a, cfg.shift);
    Meter m;
    std::mt19937_64 rng(cfg.seed);
    SolveResult out;

    DenseBlock x = initial_block(a, cfg.n_ex, x0, rng, m);
    RitzSet ritz = m.rr(a, x);
    int n_now = cfg.n_ex;
    DenseBlock x_drop(a.rows(), 0);
    StrategyState st;
    StagnationGuard guard;

    for (int j = 1; j <= cfg.max_iters; ++j) {
        m.begin_iteration();
        DenseBlock r = m.residual(a, ritz);
        ResidualReport rep = assess_convergence(a, ritz, r, cfg.n_ev, cfg.tol);
        if (rep.converged_count >= cfg.n_ev) {
            push_record(out, j, rep.overall, n_now, IterEvent::none, 0, m);
            return finish(std::move(out), SolveStatus::converged, ritz, cfg.n_ev, m);
        }
        if (guard.update(j, rep.overall)) {
            push_record(out, j, rep.overall, n_now, IterEvent::none, 0, m);
            return finish(std::move(out), SolveStatus::stagnated, ritz, cfg.n_ev, m);
        }
        st.n_now = n_now;
        const Decision d = decide(st, scfg, rep.overall, cfg.n_es, cfg.n_ex);

        DenseBlock y = m.solve(fact, ritz.vectors);
        if (cfg.expand_mode == ExpandMode::powered_x_drop && x_drop.cols() > 0)
            x_drop = m.solve(fact, x_drop);

        IterEvent ev = IterEvent::none;
        if (d == Decision::expand) {
            DenseBlock e = expansion_vectors(cfg.expand_mode, x_drop, cfg.n_ex - n_now, rng, a.rows());
            if (e.cols() > 0) {
                y = hcat(y, e);
                x_drop.resize(a.rows(), 0);
                n_now = cfg.n_ex;
                ev = IterEvent::expand;
            }
        }
        DenseBlock q = refill(m.ortho(y).q, n_now, rng, m);
        ritz = m.rr(a, q);
        if (d == Decision::shrink) {
            x_drop = ritz.vectors.rightCols(n_now - cfg.n_es);
            ritz = take_leading(ritz, cfg.n_es);
            n_now = cfg.n_es;
            ev = IterEvent::shrink;
        }
        push_record(out, j, rep.overall, n_now, ev, 0, m);
    }
    return finish(std::move(out), SolveStatus::max_iters, ritz, cfg.n_ev, m);
}

SolveResult solve_sd(const SparseSym& a, const SolverConfig& cfg_in, const StrategyConfig& scfg,
                     const DenseBlock* x0) {
    const SolverConfig cfg = resolve_config(cfg_in, SolverKind::sd, scfg, a.rows());
    Meter m;
    std::mt19937_64 rng(cfg.seed);
    SolveResult out;
    const Vector tdiag = make_precond(a, cfg.precond);

    DenseBlock x = initial_block(a, cfg.n_ex, x0, rng, m);
    RitzSet ritz = m.rr(a, x);
    int n_now = cfg.n_ex;
    DenseBlock x_drop(a.rows(), 0);
    StrategyState st;

    for (int j = 1; j <= cfg.max_iters; ++j) {
        m.begin_iteration();
        DenseBlock r = m.residual(a, ritz);
        ResidualReport rep = assess_convergence(a, ritz, r, cfg.n_ev, cfg.tol);
        if (rep.converged_count >= cfg.n_ev) {
            push_record(out, j, rep.overall, n_now, IterEvent::none, 0, m);
            return finish(std::move(out), SolveStatus::converged, ritz, cfg.n_ev, m);
        }
        st.n_now = n_now;
        const Decision d = decide(st, scfg, rep.overall, cfg.n_es, cfg.n_ex);

        IterEvent ev = IterEvent::none;
        DenseBlock xb = ritz.vectors;
        if (d == Decision::expand) {
            DenseBlock e = expansion_vectors(cfg.expand_mode, x_drop, cfg.n_ex - n_now, rng, a.rows());
            if (e.cols() > 0) {
                OrthoResult oe = m.proj_ortho(e, xb);
                xb = refill(hcat(xb, oe.q), cfg.n_ex, rng, m);
                x_drop.resize(a.rows(), 0);
                n_now = cfg.n_ex;
                ev = IterEvent::expand;
            }
        }
        OrthoResult ow = m.proj_ortho(apply_precond(tdiag, r), xb);
        if (ow.kept == 0) {
            push_record(out, j, rep.overall, n_now, ev, 0, m);
            return finish(std::move(out), SolveStatus::stagnated, ritz, cfg.n_ev, m);
        }
        RitzSet all = m.rr(a, hcat(xb, ow.q));
        ritz = take_leading(all, n_now);
        if (d == Decision::shrink) {
            x_drop = ritz.vectors.rightCols(n_now - cfg.n_es);
            ritz = take_leading(ritz, cfg.n_es);
            n_now = cfg.n_es;
            ev = IterEvent::shrink;
        }
        push_record(out, j, rep.overall, n_now, ev, 0, m);
    }
    return finish(std::move(out), SolveStatus::max_iters, ritz, cfg.n_ev, m);
}

SolveResult solve_lobpcg(const SparseSym& a, const SolverConfig& cfg_in, const StrategyConfig& scfg,
                         const DenseBlock* x0) {
    const SolverConfig cfg = resolve_config(cfg_in, SolverKind::lobpcg, scfg, a.rows());
    Meter m;
    std::mt19937_64 rng(cfg.seed);
    SolveResult out;
    const Vector tdiag = make_precond(a, cfg.precond);

    DenseBlock x = initial_block(a, cfg.n_ex, x0, rng, m);
    RitzSet ritz = m.rr(a, x);
    int n_now = cfg.n_ex;
    DenseBlock p(a.rows(), 0);
    DenseBlock x_drop(a.rows(), 0);
    StrategyState st;
    int prev_lock = 0;

    for (int j = 1; j <= cfg.max_iters; ++j) {
        m.begin_iteration();
        DenseBlock r = m.residual(a, ritz);
        ResidualReport rep = assess_convergence(a, ritz, r, cfg.n_ev, cfg.tol);
        const int lock = std::min(rep.converged_count, n_now - 1);
        if (rep.converged_count >= cfg.n_ev) {
            push_record(out, j, rep.overall, n_now, IterEvent::none, lock, m);
            return finish(std::move(out), SolveStatus::converged, ritz, cfg.n_ev, m);
        }
        st.n_now = n_now;
        const Decision d = decide(st, scfg, rep.overall, cfg.n_es, cfg.n_ex);

        // soft locking: converged leading pairs stay in X but contribute no
        // residual direction and no momentum column
        const int active = n_now - lock;
        if (lock > prev_lock && p.cols() > 0) {
            const int drop = std::min<int>(lock - prev_lock, static_cast<int>(p.cols()));
            p = p.rightCols(p.cols() - drop).eval();
        }
        OrthoResult ow = m.proj_ortho(apply_precond(tdiag, r.rightCols(active)),
                                      hcat(ritz.vectors, p));
        if (ow.kept == 0) {
            push_record(out, j, rep.overall, n_now, IterEvent::none, lock, m);
            return finish(std::move(out), SolveStatus::stagnated, ritz, cfg.n_ev, m);
        }

        IterEvent ev = IterEvent::none;
        DenseBlock xb = ritz.vectors;
        DenseBlock s = hcat(hcat(xb, p), ow.q);
        if (d == Decision::expand) {
            DenseBlock e = expansion_vectors(cfg.expand_mode, x_drop, 2 * (cfg.n_ex - cfg.n_es),
                                             rng, a.rows());
            if (e.cols() > 0) {
                OrthoResult oe = m.proj_ortho(e, s);
                // re-append the saved directions: first half widens X, the
                // rest carries over into P; odd counts favour X
                int hx = std::min((oe.kept + 1) / 2, cfg.n_ex - n_now);
                xb = hcat(xb, oe.q.leftCols(hx));
                p = hcat(p, oe.q.rightCols(oe.kept - hx));
                if (xb.cols() < cfg.n_ex)
                    xb = hcat(xb, fresh_cols(cfg.n_ex - static_cast<int>(xb.cols()),
                                             hcat(hcat(xb, p), ow.q), rng, m));
                x_drop.resize(a.rows(), 0);
                n_now = cfg.n_ex;
                ev = IterEvent::expand;
                s = hcat(hcat(xb, p), ow.q);
            }
        }
        RitzSet all = m.rr(a, s);
        auto [xn, pn] = hl_trick(s, all.coeffs, n_now, lock);
        m.w.ortho_flops += s.cols() * (n_now - lock) * (2 * n_now + (n_now - lock));
        ritz = RitzSet{all.values.head(n_now), xn, all.coeffs.leftCols(n_now)};
        p = pn;
        if (d == Decision::shrink) {
            DenseBlock drop_x = ritz.vectors.rightCols(n_now - cfg.n_es);
            DenseBlock drop_p = p.cols() > cfg.n_es
                                    ? DenseBlock(p.rightCols(p.cols() - cfg.n_es))
                                    : DenseBlock(a.rows(), 0);
            x_drop = hcat(drop_x, drop_p);
            ritz = take_leading(ritz, cfg.n_es);
            if (p.cols() > cfg.n_es) p = p.leftCols(cfg.n_es).eval();
            n_now = cfg.n_es;
            ev = IterEvent::shrink;
        }
        if (ev == IterEvent::none && lock > prev_lock) ev = IterEvent::lock;
        push_record(out, j, rep.overall, n_now, ev, lock, m);
        prev_lock = lock;
    }
    return finish(std::move(out), SolveStatus::max_iters, ritz, cfg.n_ev, m);
}

SolveResult solve_tracemin(const SparseSym& a, const SolverConfig& cfg_in,
                           const StrategyConfig& scfg, const DenseBlock* x0) {
    const SolverConfig cfg = resolve_config(cfg_in, SolverKind::tracemin, scfg, a.rows());
    Meter m;
    std::mt19937_64 rng(cfg.seed);
    SolveResult out;

    DenseBlock x = initial_block(a, cfg.n_ex, x0, rng, m);
    RitzSet ritz = m.rr(a, x);
    int n_now = cfg.n_ex;
    DenseBlock x_drop(a.rows(), 0);
    StrategyState st;

    for (int j = 1; j <= cfg.max_iters; ++j) {
        m.begin_iteration();
        DenseBlock r = m.residual(a, ritz);
        ResidualReport rep = assess_convergence(a, ritz, r, cfg.n_ev, cfg.tol);
        if (rep.converged_count >= cfg.n_ev) {
            push_record(out, j, rep.overall, n_now, IterEvent::none, 0, m);
            return finish(std::move(out), SolveStatus::converged, ritz, cfg.n_ev, m);
        }
        st.n_now = n_now;
        const Decision d = decide(st, scfg, rep.overall, cfg.n_es, cfg.n_ex);

        // correction solve on the orthogonal complement of X:
        // (P_X A P_X) delta = P_X r, five CG steps per column
        const DenseBlock& v = ritz.vectors;
        auto project = [&v](Vector u) {
            u -= v * (v.transpose() * u);
            return u;
        };
        LinOp op = [&](const Vector& u) {
            m.w.spmv_cols += 1;
            return project(spmv(a, project(u)));
        };
        DenseBlock rhs(r.rows(), r.cols());
        for (Eigen::Index c = 0; c < r.cols(); ++c) rhs.col(c) = project(r.col(c));
        DenseBlock y = v - cg_solve(op, rhs, cfg.cg_iters);

        IterEvent ev = IterEvent::none;
        if (d == Decision::expand) {
            DenseBlock e = expansion_vectors(cfg.expand_mode, x_drop, cfg.n_ex - n_now, rng, a.rows());
            if (e.cols() > 0) {
                y = hcat(y, e);
                x_drop.resize(a.rows(), 0);
                n_now = cfg.n_ex;
                ev = IterEvent::expand;
            }
        }
        DenseBlock q = refill(m.ortho(y).q, n_now, rng, m);
        ritz = m.rr(a, q);
        if (d == Decision::shrink) {
            x_drop = ritz.vectors.rightCols(n_now - cfg.n_es);
            ritz = take_leading(ritz, cfg.n_es);
            n_now = cfg.n_es;
            ev = IterEvent::shrink;
        }
        push_record(out, j, rep.overall, n_now, ev, 0, m);
    }
    return finish(std::move(out), SolveStatus::max_iters, ritz, cfg.n_ev, m);
}

SolveResult solve(SolverKind kind, const SparseSym& a, const SolverConfig& cfg,
                  const StrategyConfig& scfg, const DenseBlock* x0) {
    switch (kind) {
        case SolverKind::si: return solve_si(a, cfg, scfg, x0);
        case SolverKind::sd: return solve_sd(a, cfg, scfg, x0);
        case SolverKind::lobpcg: return solve_lobpcg(a, cfg, scfg, x0);
        case SolverKind::tracemin: return solve_tracemin(a, cfg, scfg, x0);
    }
    throw std::invalid_argument("unknown solver kind");
}

}  // namespace blockeig
