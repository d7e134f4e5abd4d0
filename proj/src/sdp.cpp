#include "qmetop/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace qmetop::sdp {

int svec_size(const BlockStructure& blocks) {
    int n = 0;
    for (const BlockSpec& b : blocks) n += b.svec_size();
    return n;
}

BlockMatrix zero_blocks(const BlockStructure& blocks) {
    BlockMatrix m;
    m.reserve(blocks.size());
    for (const BlockSpec& b : blocks) m.push_back(RealMatrix::Zero(b.dim, b.dim));
    return m;
}

BlockMatrix identity_blocks(const BlockStructure& blocks) {
    BlockMatrix m;
    m.reserve(blocks.size());
    for (const BlockSpec& b : blocks) m.push_back(RealMatrix::Identity(b.dim, b.dim));
    return m;
}

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865475;
}

RealVector svec(const BlockStructure& blocks, const BlockMatrix& m) {
    RealVector v(svec_size(blocks));
    int at = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const int n = blocks[b].dim;
        if (blocks[b].diagonal) {
            for (int i = 0; i < n; ++i) v(at++) = m[b](i, i);
        } else {
            for (int j = 0; j < n; ++j) {
                v(at++) = m[b](j, j);
                for (int i = j + 1; i < n; ++i) v(at++) = kSqrt2 * m[b](i, j);
            }
        }
    }
    return v;
}

BlockMatrix sunvec(const BlockStructure& blocks, const RealVector& v) {
    BlockMatrix m = zero_blocks(blocks);
    int at = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const int n = blocks[b].dim;
        if (blocks[b].diagonal) {
            for (int i = 0; i < n; ++i) m[b](i, i) = v(at++);
        } else {
            for (int j = 0; j < n; ++j) {
                m[b](j, j) = v(at++);
                for (int i = j + 1; i < n; ++i) {
                    const double x = kInvSqrt2 * v(at++);
                    m[b](i, j) = x;
                    m[b](j, i) = x;
                }
            }
        }
    }
    return m;
}

double block_inner(const BlockMatrix& a, const BlockMatrix& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += (a[k].array() * b[k].array()).sum();
    }
    return s;
}

BlockMatrix LinearMap::apply(const BlockMatrix& x) const {
    return sunvec(out_blocks, mat * svec(in_blocks, x));
}

BlockMatrix LinearMap::apply_adjoint(const BlockMatrix& y) const {
    return sunvec(in_blocks, mat.transpose() * svec(out_blocks, y));
}

LinearMap LinearMap::zero(const BlockStructure& in, const BlockStructure& out) {
    LinearMap map;
    map.in_blocks = in;
    map.out_blocks = out;
    map.mat = RealMatrix::Zero(svec_size(out), svec_size(in));
    return map;
}

LinearMap adjoint(const LinearMap& map) {
    LinearMap adj;
    adj.in_blocks = map.out_blocks;
    adj.out_blocks = map.in_blocks;
    adj.mat = map.mat.transpose();
    return adj;
}

void SdpProblem::validate() const {
    if (objective.size() != blocks.size()) {
        throw std::invalid_argument("SdpProblem: objective block count mismatch");
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (objective[b].rows() != blocks[b].dim || objective[b].cols() != blocks[b].dim) {
            throw std::invalid_argument("SdpProblem: objective block dimension mismatch");
        }
    }
    if (eq.mat.size() != 0) {
        if (eq.in_blocks != blocks || svec_size(eq.out_blocks) != eq.mat.rows() ||
            svec_size(eq.in_blocks) != eq.mat.cols()) {
            throw std::invalid_argument("SdpProblem: equality map shape mismatch");
        }
        if (eq_rhs.size() != eq.out_blocks.size()) {
            throw std::invalid_argument("SdpProblem: equality rhs mismatch");
        }
    }
    if (ineq.mat.size() != 0) {
        if (ineq.in_blocks != blocks || svec_size(ineq.out_blocks) != ineq.mat.rows() ||
            svec_size(ineq.in_blocks) != ineq.mat.cols()) {
            throw std::invalid_argument("SdpProblem: inequality map shape mismatch");
        }
        if (ineq_rhs.size() != ineq.out_blocks.size()) {
            throw std::invalid_argument("SdpProblem: inequality rhs mismatch");
        }
    }
}

SdpProblem SdpProblem::minimize(BlockStructure blocks_, BlockMatrix objective_) {
    SdpProblem p;
    p.blocks = std::move(blocks_);
    p.objective = std::move(objective_);
    p.eq = LinearMap::zero(p.blocks, {});
    p.ineq = LinearMap::zero(p.blocks, {});
    return p;
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kMaxIterations: return "max-iterations";
        case SolveStatus::kInfeasibleSuspected: return "infeasible-suspected";
        case SolveStatus::kStepFailure: return "step-failure";
    }
    return "unknown";
}

// ----------------------------------------------------------------------------
// interior-point core on the slack-extended standard form
//   min c.x   s.t.  Amat x = b,  X >= 0  (x = svec of block variable X)
//
// The iteration runs in extended precision: the Nesterov-Todd scaling has
// entries of size sqrt(x/z) and near-degenerate optima push the amplified
// rounding of double arithmetic above the 1e-9 gap target.
// ----------------------------------------------------------------------------

namespace {

using LD = long double;
using MatL = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<LD, Eigen::Dynamic, 1>;
using LBlocks = std::vector<MatL>;

constexpr LD kSqrt2L = 1.41421356237309504880168872420969808L;
constexpr LD kInvSqrt2L = 0.70710678118654752440084436210484904L;

LBlocks zero_blocks_l(const BlockStructure& blocks) {
    LBlocks m;
    m.reserve(blocks.size());
    for (const BlockSpec& b : blocks) m.push_back(MatL::Zero(b.dim, b.dim));
    return m;
}

VecL svec_l(const BlockStructure& blocks, const LBlocks& m) {
    VecL v(svec_size(blocks));
    int at = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const int n = blocks[b].dim;
        if (blocks[b].diagonal) {
            for (int i = 0; i < n; ++i) v(at++) = m[b](i, i);
        } else {
            for (int j = 0; j < n; ++j) {
                v(at++) = m[b](j, j);
                for (int i = j + 1; i < n; ++i) v(at++) = kSqrt2L * m[b](i, j);
            }
        }
    }
    return v;
}

LBlocks sunvec_l(const BlockStructure& blocks, const VecL& v) {
    LBlocks m = zero_blocks_l(blocks);
    int at = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const int n = blocks[b].dim;
        if (blocks[b].diagonal) {
            for (int i = 0; i < n; ++i) m[b](i, i) = v(at++);
        } else {
            for (int j = 0; j < n; ++j) {
                m[b](j, j) = v(at++);
                for (int i = j + 1; i < n; ++i) {
                    const LD x = kInvSqrt2L * v(at++);
                    m[b](i, j) = x;
                    m[b](j, i) = x;
                }
            }
        }
    }
    return m;
}

LD block_inner_l(const LBlocks& a, const LBlocks& b) {
    LD s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += (a[k].array() * b[k].array()).sum();
    }
    return s;
}

MatL sunvec_block(const BlockSpec& spec, const VecL& v) {
    MatL m = MatL::Zero(spec.dim, spec.dim);
    int at = 0;
    if (spec.diagonal) {
        for (int i = 0; i < spec.dim; ++i) m(i, i) = v(at++);
    } else {
        for (int j = 0; j < spec.dim; ++j) {
            m(j, j) = v(at++);
            for (int i = j + 1; i < spec.dim; ++i) {
                const LD x = kInvSqrt2L * v(at++);
                m(i, j) = x;
                m(j, i) = x;
            }
        }
    }
    return m;
}

VecL svec_block(const BlockSpec& spec, const MatL& m) {
    VecL v(spec.svec_size());
    int at = 0;
    if (spec.diagonal) {
        for (int i = 0; i < spec.dim; ++i) v(at++) = m(i, i);
    } else {
        for (int j = 0; j < spec.dim; ++j) {
            v(at++) = m(j, j);
            for (int i = j + 1; i < spec.dim; ++i) v(at++) = kSqrt2L * m(i, j);
        }
    }
    return v;
}

struct Scaling {
    // NT scaling point per block; diagonal blocks store the diagonal only
    LBlocks w;
    std::vector<VecL> w_diag;
};

MatL sym_sqrt(const MatL& s, bool inverse = false) {
    Eigen::SelfAdjointEigenSolver<MatL> es(s);
    VecL e = es.eigenvalues();
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const LD v = std::max<LD>(e(i), 1e-300L);
        e(i) = inverse ? LD(1) / std::sqrt(v) : std::sqrt(v);
    }
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
}

Scaling nt_scaling(const BlockStructure& blocks, const LBlocks& x,
                   const LBlocks& z) {
    Scaling s;
    s.w.resize(blocks.size());
    s.w_diag.resize(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].diagonal) {
            VecL w(blocks[b].dim);
            for (int i = 0; i < blocks[b].dim; ++i) {
                w(i) = std::sqrt(x[b](i, i) / z[b](i, i));
            }
            s.w_diag[b] = w;
        } else {
            const MatL zs = sym_sqrt(z[b]);
            const MatL zsi = sym_sqrt(z[b], true);
            const MatL inner = sym_sqrt(MatL(zs * x[b] * zs));
            s.w[b] = zsi * inner * zsi;
        }
    }
    return s;
}

MatL scale_block(const BlockSpec& spec, const Scaling& s, std::size_t b,
                 const MatL& u) {
    if (spec.diagonal) {
        MatL out = MatL::Zero(spec.dim, spec.dim);
        for (int i = 0; i < spec.dim; ++i) {
            out(i, i) = s.w_diag[b](i) * s.w_diag[b](i) * u(i, i);
        }
        return out;
    }
    MatL out = s.w[b] * u * s.w[b];
    return LD(0.5) * (out + out.transpose()).eval();
}

LBlocks scale_wxw(const BlockStructure& blocks, const Scaling& s, const LBlocks& u) {
    LBlocks out;
    out.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        out.push_back(scale_block(blocks[b], s, b, u[b]));
    }
    return out;
}

LBlocks block_inverse(const BlockStructure& blocks, const LBlocks& m) {
    LBlocks out = zero_blocks_l(blocks);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].diagonal) {
            for (int i = 0; i < blocks[b].dim; ++i) out[b](i, i) = LD(1) / m[b](i, i);
        } else {
            Eigen::SelfAdjointEigenSolver<MatL> es(m[b]);
            VecL e = es.eigenvalues();
            for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = LD(1) / e(i);
            out[b] = es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
        }
    }
    return out;
}

// largest alpha in (0, 1] with S + alpha dS >= 0, scaled by `fraction`
LD max_step(const BlockStructure& blocks, const LBlocks& s, const LBlocks& ds,
            LD fraction) {
    LD alpha = 1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].diagonal) {
            for (int i = 0; i < blocks[b].dim; ++i) {
                if (ds[b](i, i) < 0) {
                    alpha = std::min(alpha, -fraction * s[b](i, i) / ds[b](i, i));
                }
            }
        } else {
            const Eigen::LLT<MatL> llt(s[b]);
            if (llt.info() != Eigen::Success) return 0;
            const MatL l = llt.matrixL();
            MatL t = l.triangularView<Eigen::Lower>().solve(ds[b]);
            t = l.triangularView<Eigen::Lower>()
                    .solve(MatL(t.transpose()))
                    .transpose();
            t = LD(0.5) * (t + t.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<MatL> es(t);
            const LD lmin = es.eigenvalues().minCoeff();
            if (lmin < 0) alpha = std::min(alpha, -fraction / lmin);
        }
    }
    return alpha;
}

LD block_norm_l(const LBlocks& m) {
    LD s = 0;
    for (const MatL& b : m) s += b.squaredNorm();
    return std::sqrt(s);
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolveOptions& options) {
    problem.validate();

    // slack-extended standard form
    BlockStructure blocks = problem.blocks;
    const int n_var = svec_size(problem.blocks);
    const int m_eq = problem.eq.mat.size() ? static_cast<int>(problem.eq.mat.rows()) : 0;
    const int m_in =
        problem.ineq.mat.size() ? static_cast<int>(problem.ineq.mat.rows()) : 0;
    for (const BlockSpec& bs : problem.ineq.out_blocks) blocks.push_back(bs);
    const int n_all = svec_size(blocks);
    const int m = m_eq + m_in;

    MatL a_mat = MatL::Zero(m, n_all);
    if (m_eq) a_mat.topLeftCorner(m_eq, n_var) = problem.eq.mat.cast<LD>();
    if (m_in) {
        a_mat.bottomLeftCorner(m_in, n_var) = problem.ineq.mat.cast<LD>();
        a_mat.bottomRightCorner(m_in, n_all - n_var) = -MatL::Identity(m_in, m_in);
    }
    VecL b_vec = VecL::Zero(m);
    if (m_eq) {
        b_vec.head(m_eq) = svec(problem.eq.out_blocks, problem.eq_rhs).cast<LD>();
    }
    if (m_in) {
        b_vec.tail(m_in) = svec(problem.ineq.out_blocks, problem.ineq_rhs).cast<LD>();
    }
    LBlocks c_blocks = zero_blocks_l(blocks);
    for (std::size_t bidx = 0; bidx < problem.blocks.size(); ++bidx) {
        c_blocks[bidx] = problem.objective[bidx].cast<LD>();
    }

    int nu = 0;
    for (const BlockSpec& bs : blocks) nu += bs.dim;

    // starting point
    LD scale = options.init_scale;
    if (scale <= 0) {
        LD data = std::max<LD>(1, b_vec.size() ? b_vec.cwiseAbs().maxCoeff() : 0);
        for (const MatL& cb : c_blocks) {
            if (cb.size()) data = std::max<LD>(data, cb.cwiseAbs().maxCoeff());
        }
        scale = std::max<LD>(10, data);
    }
    LBlocks x = zero_blocks_l(blocks);
    LBlocks z = zero_blocks_l(blocks);
    for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
        x[bidx] = scale * MatL::Identity(blocks[bidx].dim, blocks[bidx].dim);
        z[bidx] = x[bidx];
    }
    VecL y = VecL::Zero(m);

    const VecL c_vec = svec_l(blocks, c_blocks);
    const LD b_scale = 1 + (m ? b_vec.cwiseAbs().maxCoeff() : LD(0));
    const LD c_scale = 1 + (c_vec.size() ? c_vec.cwiseAbs().maxCoeff() : LD(0));

    // svec offsets and the blocks each constraint row actually touches
    std::vector<int> block_offset(blocks.size());
    {
        int at = 0;
        for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
            block_offset[bidx] = at;
            at += blocks[bidx].svec_size();
        }
    }
    std::vector<std::vector<int>> active_blocks(m);
    std::vector<std::vector<std::pair<int, LD>>> a_rows(m);
    for (int j = 0; j < m; ++j) {
        for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
            const auto seg = a_mat.row(j).segment(block_offset[bidx],
                                                  blocks[bidx].svec_size());
            if (seg.cwiseAbs().maxCoeff() != 0) {
                active_blocks[j].push_back(static_cast<int>(bidx));
            }
        }
        for (int c = 0; c < n_all; ++c) {
            if (a_mat(j, c) != 0) a_rows[j].emplace_back(c, a_mat(j, c));
        }
    }
    const auto apply_a = [&](const VecL& v) {
        VecL out(m);
        for (int j = 0; j < m; ++j) {
            LD s = 0;
            for (const auto& [c, val] : a_rows[j]) s += val * v(c);
            out(j) = s;
        }
        return out;
    };
    const auto apply_at = [&](const VecL& yv) {
        VecL out = VecL::Zero(n_all);
        for (int j = 0; j < m; ++j) {
            const LD yj = yv(j);
            if (yj == 0) continue;
            for (const auto& [c, val] : a_rows[j]) out(c) += val * yj;
        }
        return out;
    };

    SdpSolution sol;
    SolveStatus status = SolveStatus::kMaxIterations;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        const VecL x_vec = svec_l(blocks, x);
        const VecL rp = b_vec - apply_a(x_vec);
        const LBlocks aty_blocks = sunvec_l(blocks, apply_at(y));
        LBlocks rd = zero_blocks_l(blocks);
        for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
            rd[bidx] = c_blocks[bidx] - z[bidx] - aty_blocks[bidx];
        }
        const LD pobj = c_vec.dot(x_vec);
        const LD dobj = b_vec.dot(y);
        const LD gap = pobj - dobj;
        const LD mu = block_inner_l(x, z) / nu;
        const LD rp_norm = m ? rp.cwiseAbs().maxCoeff() : LD(0);
        const LD rd_norm = [&] {
            LD v = 0;
            for (const MatL& bm : rd) {
                if (bm.size()) v = std::max<LD>(v, bm.cwiseAbs().maxCoeff());
            }
            return v;
        }();

        sol.stats.gap_history.push_back(static_cast<double>(std::abs(gap)));
        sol.stats.primal_residuals.push_back(static_cast<double>(rp_norm));
        sol.stats.dual_residuals.push_back(static_cast<double>(rd_norm));

        const LD rel_gap = std::abs(gap) / std::max<LD>(1, std::abs(pobj));
        if (rp_norm <= options.tol * b_scale && rd_norm <= options.tol * c_scale &&
            rel_gap <= options.tol) {
            status = SolveStatus::kOptimal;
            break;
        }
        if (std::abs(dobj) > LD(1e13) * std::max<LD>(1, std::abs(pobj)) ||
            block_norm_l(x) > LD(1e14)) {
            status = SolveStatus::kInfeasibleSuspected;
            break;
        }

        const Scaling w = nt_scaling(blocks, x, z);

        // Schur complement M = A T A^T with T = svec(W . W); constraint rows
        // touch few blocks, so scale only those
        MatL t_cols = MatL::Zero(n_all, m);
        for (int j = 0; j < m; ++j) {
            for (const int bidx : active_blocks[j]) {
                const int off = block_offset[bidx];
                const int len = blocks[bidx].svec_size();
                const MatL aj = sunvec_block(blocks[bidx],
                                             a_mat.row(j).segment(off, len).transpose());
                t_cols.col(j).segment(off, len) =
                    svec_block(blocks[bidx], scale_block(blocks[bidx], w, bidx, aj));
            }
        }
        MatL schur = MatL::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            for (const auto& [c, val] : a_rows[j]) {
                schur.row(j) += val * t_cols.row(c);
            }
        }
        schur = LD(0.5) * (schur + schur.transpose()).eval();
        const LD schur_scale =
            std::max<LD>(LD(1e-300), schur.diagonal().cwiseAbs().maxCoeff());
        LD reg = 0;
        Eigen::LDLT<MatL> ldlt(schur);
        while (ldlt.info() != Eigen::Success && reg < LD(1e-6) * schur_scale) {
            reg = std::max<LD>(LD(1e-16) * schur_scale, reg * 100);
            ldlt.compute(schur + reg * MatL::Identity(m, m));
        }
        if (ldlt.info() != Eigen::Success) {
            status = SolveStatus::kStepFailure;
            break;
        }

        // one Newton solve of
        //   A dX = r1,  A^T dy + dZ = R2,  dX + W dZ W = R3
        const auto newton = [&](const VecL& r1, const LBlocks& r2, const LBlocks& r3,
                                VecL& dy, LBlocks& dx, LBlocks& dz) {
            const LBlocks w_r2_w = scale_wxw(blocks, w, r2);
            LBlocks tmp = r3;
            for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
                tmp[bidx] -= w_r2_w[bidx];
            }
            const VecL rhs = r1 - apply_a(svec_l(blocks, tmp));
            dy = ldlt.solve(rhs);
            dy += ldlt.solve(VecL(rhs - schur * dy));
            const LBlocks aty_d = sunvec_l(blocks, apply_at(dy));
            dz = zero_blocks_l(blocks);
            for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
                dz[bidx] = r2[bidx] - aty_d[bidx];
            }
            const LBlocks w_dz_w = scale_wxw(blocks, w, dz);
            dx = r3;
            for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
                dx[bidx] -= w_dz_w[bidx];
                dx[bidx] = LD(0.5) * (dx[bidx] + dx[bidx].transpose()).eval();
            }
        };

        // Newton solve plus KKT-level refinement; the scaling term W dZ W
        // amplifies rounding near the boundary and the correction rounds pull
        // the equation residuals back to working precision
        const auto solve_direction = [&](const LBlocks& rc, VecL& dy, LBlocks& dx,
                                         LBlocks& dz) {
            newton(rp, rd, rc, dy, dx, dz);
            for (int round = 0; round < 2; ++round) {
                const VecL e1 = rp - apply_a(svec_l(blocks, dx));
                const LBlocks aty_d = sunvec_l(blocks, apply_at(dy));
                LBlocks e2 = zero_blocks_l(blocks);
                const LBlocks w_dz_w = scale_wxw(blocks, w, dz);
                LBlocks e3 = zero_blocks_l(blocks);
                for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
                    e2[bidx] = rd[bidx] - aty_d[bidx] - dz[bidx];
                    e3[bidx] = rc[bidx] - dx[bidx] - w_dz_w[bidx];
                }
                VecL cy;
                LBlocks cx, cz;
                newton(e1, e2, e3, cy, cx, cz);
                dy += cy;
                for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
                    dx[bidx] += cx[bidx];
                    dz[bidx] += cz[bidx];
                }
            }
        };

        LD fraction = options.step_fraction;
        if (mu < LD(1e-6) * scale) fraction = std::max<LD>(fraction, 0.995L);
        if (mu < LD(1e-9) * scale) fraction = std::max<LD>(fraction, 0.9995L);

        // predictor (affine scaling)
        LBlocks rc = zero_blocks_l(blocks);
        for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
            rc[bidx] = -x[bidx];
        }
        VecL dy_aff;
        LBlocks dx_aff, dz_aff;
        solve_direction(rc, dy_aff, dx_aff, dz_aff);
        const LD ap_aff = max_step(blocks, x, dx_aff, fraction);
        const LD ad_aff = max_step(blocks, z, dz_aff, fraction);
        LBlocks x_aff = x, z_aff = z;
        for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
            x_aff[bidx] += ap_aff * dx_aff[bidx];
            z_aff[bidx] += ad_aff * dz_aff[bidx];
        }
        const LD mu_aff = block_inner_l(x_aff, z_aff) / nu;
        LD sigma = mu_aff / mu;
        sigma = sigma * sigma * sigma;
        sigma = std::min<LD>(1, std::max<LD>(sigma, LD(1e-12)));

        // corrector with the centering target sigma*mu
        const LBlocks z_inv = block_inverse(blocks, z);
        for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
            rc[bidx] = sigma * mu * z_inv[bidx] - x[bidx];
        }
        VecL dy;
        LBlocks dx, dz;
        solve_direction(rc, dy, dx, dz);
        LD ap = max_step(blocks, x, dx, fraction);
        LD ad = max_step(blocks, z, dz, fraction);
        if (ap < LD(1e-12) && ad < LD(1e-12)) {
            // fall back to a pure centering step before giving up
            for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
                rc[bidx] = mu * z_inv[bidx] - x[bidx];
            }
            solve_direction(rc, dy, dx, dz);
            ap = max_step(blocks, x, dx, fraction);
            ad = max_step(blocks, z, dz, fraction);
            if (ap < LD(1e-12) && ad < LD(1e-12)) {
                status = SolveStatus::kStepFailure;
                break;
            }
        }
        for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
            x[bidx] += ap * dx[bidx];
            z[bidx] += ad * dz[bidx];
        }
        y += ad * dy;
    }
    sol.stats.iterations = iter;

    // report in the original problem's terms
    sol.x.clear();
    for (std::size_t bidx = 0; bidx < problem.blocks.size(); ++bidx) {
        sol.x.push_back(x[bidx].cast<double>());
    }
    const VecL x_vec = svec_l(blocks, x);
    sol.primal_value = static_cast<double>(c_vec.dot(x_vec));
    sol.dual_value = m ? static_cast<double>(b_vec.dot(y)) : 0.0;
    sol.gap = static_cast<double>(c_vec.dot(x_vec) - b_vec.dot(y));
    sol.status = status;
    if (m_eq) {
        sol.y = sunvec(problem.eq.out_blocks,
                       RealVector(y.head(m_eq).cast<double>()));
    } else {
        sol.y = zero_blocks(problem.eq.out_blocks);
    }
    if (m_in) {
        sol.z = sunvec(problem.ineq.out_blocks,
                       RealVector(y.tail(m_in).cast<double>()));
    } else {
        sol.z = zero_blocks(problem.ineq.out_blocks);
    }
    return sol;
}


// --------------------------- complex embedding -------------------------------

RealMatrix complex_embed(const Matrix& h) {
    opalg::require_hermitian(h, "complex_embed", 1e-10);
    const int n = static_cast<int>(h.rows());
    RealMatrix s(2 * n, 2 * n);
    s.topLeftCorner(n, n) = h.real();
    s.bottomRightCorner(n, n) = h.real();
    s.topRightCorner(n, n) = -h.imag();
    s.bottomLeftCorner(n, n) = h.imag();
    return 0.5 * (s + s.transpose()).eval();
}

Matrix complex_unembed(const RealMatrix& s) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0) {
        throw std::invalid_argument("complex_unembed: matrix must be even square");
    }
    const int n = static_cast<int>(s.rows()) / 2;
    const RealMatrix re = 0.5 * (s.topLeftCorner(n, n) + s.bottomRightCorner(n, n));
    const RealMatrix im_raw =
        0.5 * (s.bottomLeftCorner(n, n) - s.topRightCorner(n, n));
    const RealMatrix im = 0.5 * (im_raw - im_raw.transpose());
    Matrix h(n, n);
    h.real() = 0.5 * (re + re.transpose());
    h.imag() = im;
    return h;
}

RealMatrix embed_functional(const Matrix& a) {
    return 0.5 * complex_embed(a);
}

// --------------------------- trace-norm gadget ------------------------------

SdpProblem trace_norm_sdp(const Matrix& k) {
    opalg::require_hermitian(k, "trace_norm_sdp", 1e-10);
    const int n2 = 2 * static_cast<int>(k.rows());
    SdpProblem p;
    p.blocks = {BlockSpec{n2, false}, BlockSpec{n2, false}};
    // Tr P + Tr Q over the hermitian matrices = half the embedded traces
    p.objective = {0.5 * RealMatrix::Identity(n2, n2),
                   0.5 * RealMatrix::Identity(n2, n2)};
    p.eq = LinearMap::zero(p.blocks, {});
    // P - K >= 0 and Q + K >= 0
    p.ineq.in_blocks = p.blocks;
    p.ineq.out_blocks = p.blocks;
    p.ineq.mat = RealMatrix::Identity(svec_size(p.blocks), svec_size(p.blocks));
    const RealMatrix k_emb = complex_embed(k);
    p.ineq_rhs = {k_emb, -k_emb};
    return p;
}

TraceNormPoint trace_norm_point(const SdpProblem& problem, const SdpSolution& sol) {
    if (problem.blocks.size() != 2 || sol.x.size() != 2) {
        throw std::invalid_argument("trace_norm_point: not a trace-norm problem");
    }
    return TraceNormPoint{complex_unembed(sol.x[0]), complex_unembed(sol.x[1])};
}

}  // namespace qmetop::sdp
