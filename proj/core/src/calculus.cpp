// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/calculus.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "elc/reduce.hpp"

namespace elc {

const char* to_string(CalculusScheme scheme) {
    return scheme == CalculusScheme::spectral ? "spectral" : "fd2";
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// FFT scratch bound to one grid extent. Plans are created with FFTW_ESTIMATE
// so that plan selection, and therefore roundoff, is reproducible between
// invocations. One workspace per thread per extent.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(std::array<std::size_t, 3> n) : n_(n) {
        ntot_ = n[0] * n[1] * n[2];
        nhalf_ = n[2] / 2 + 1;
        nc_ = n[0] * n[1] * nhalf_;
        std::lock_guard<std::mutex> lock(planner_mutex());
        rbuf_ = static_cast<double*>(fftw_malloc(sizeof(double) * ntot_));
        cfwd_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc_));
        cwork_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc_));
        fwd_ = fftw_plan_dft_r2c_3d(static_cast<int>(n[0]), static_cast<int>(n[1]),
                                    static_cast<int>(n[2]), rbuf_, cfwd_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_3d(static_cast<int>(n[0]), static_cast<int>(n[1]),
                                    static_cast<int>(n[2]), cwork_, rbuf_, FFTW_ESTIMATE);
        if (fwd_ == nullptr || bwd_ == nullptr) throw Error("fftw plan creation failed");
    }

    ~SpectralWorkspace() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(rbuf_);
        fftw_free(cfwd_);
        fftw_free(cwork_);
        if (cacc_ != nullptr) fftw_free(cacc_);
    }

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    /// Load component `offset` of a strided raster and transform it.
    void forward(const double* src, std::size_t stride, std::size_t offset) {
        for (std::size_t i = 0; i < ntot_; ++i) rbuf_[i] = src[i * stride + offset];
        fftw_execute(fwd_);
    }

    void clear_accumulator() {
        if (cacc_ == nullptr) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            cacc_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc_));
        }
        for (std::size_t b = 0; b < nc_; ++b) {
            cacc_[b][0] = 0.0;
            cacc_[b][1] = 0.0;
        }
    }

    /// cacc += factor * cfwd, for summing derivative contributions in
    /// spectral space (one inverse transform instead of one per term).
    template <typename FactorFn>
    void accumulate_with_factor(FactorFn&& factor) {
        std::size_t b = 0;
        for (std::size_t i1 = 0; i1 < n_[0]; ++i1) {
            for (std::size_t i2 = 0; i2 < n_[1]; ++i2) {
                for (std::size_t i3 = 0; i3 < nhalf_; ++i3, ++b) {
                    const auto [wr, wi] = factor(i1, i2, i3);
                    const double re = cfwd_[b][0];
                    const double im = cfwd_[b][1];
                    cacc_[b][0] += wr * re - wi * im;
                    cacc_[b][1] += wr * im + wi * re;
                }
            }
        }
    }

    void inverse_from_accumulator(double* dst, std::size_t stride, std::size_t offset) {
        for (std::size_t b = 0; b < nc_; ++b) {
            cwork_[b][0] = cacc_[b][0];
            cwork_[b][1] = cacc_[b][1];
        }
        fftw_execute(bwd_);
        const double scale = 1.0 / static_cast<double>(ntot_);
        for (std::size_t i = 0; i < ntot_; ++i) dst[i * stride + offset] = rbuf_[i] * scale;
    }

    /// cwork <- factor * cfwd, inverse transform, store into dst (strided).
    /// Factor is supplied per axis-index triple as a complex pair.
    template <typename FactorFn>
    void inverse_with_factor(FactorFn&& factor, double* dst, std::size_t stride,
                             std::size_t offset) {
        std::size_t b = 0;
        for (std::size_t i1 = 0; i1 < n_[0]; ++i1) {
            for (std::size_t i2 = 0; i2 < n_[1]; ++i2) {
                for (std::size_t i3 = 0; i3 < nhalf_; ++i3, ++b) {
                    const auto [wr, wi] = factor(i1, i2, i3);
                    const double re = cfwd_[b][0];
                    const double im = cfwd_[b][1];
                    cwork_[b][0] = wr * re - wi * im;
                    cwork_[b][1] = wr * im + wi * re;
                }
            }
        }
        fftw_execute(bwd_);
        const double scale = 1.0 / static_cast<double>(ntot_);
        for (std::size_t i = 0; i < ntot_; ++i) dst[i * stride + offset] = rbuf_[i] * scale;
    }

    std::size_t nhalf() const { return nhalf_; }

  private:
    std::array<std::size_t, 3> n_;
    std::size_t ntot_ = 0, nhalf_ = 0, nc_ = 0;
    double* rbuf_ = nullptr;
    fftw_complex* cfwd_ = nullptr;
    fftw_complex* cwork_ = nullptr;
    fftw_complex* cacc_ = nullptr;  // lazily allocated accumulator
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

SpectralWorkspace& workspace_for(const Grid& grid) {
    thread_local std::map<std::array<std::size_t, 3>, std::unique_ptr<SpectralWorkspace>> cache;
    auto& slot = cache[grid.dims];
    if (!slot) slot = std::make_unique<SpectralWorkspace>(grid.dims);
    return *slot;
}

// Per-axis wavenumber tables. kd zeroes the Nyquist mode (odd derivatives);
// k2 keeps the true squared wavenumber (even derivatives).
struct WaveTables {
    std::array<std::vector<double>, 3> kd;
    std::array<std::vector<double>, 3> k2;
    std::array<std::vector<bool>, 3> keep;  // 2/3-rule mask

    explicit WaveTables(const Grid& grid) {
        for (int a = 0; a < 3; ++a) {
            const std::size_t n = grid.dims[a];
            const double base = kTwoPi / grid.box[a];
            const auto cutoff = static_cast<long>(n / 3);
            kd[a].resize(n);
            k2[a].resize(n);
            keep[a].resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                long m = static_cast<long>(i);
                if (m > static_cast<long>(n / 2)) m -= static_cast<long>(n);
                const double k = base * static_cast<double>(m);
                const bool nyquist = (n % 2 == 0) && (i == n / 2);
                kd[a][i] = nyquist ? 0.0 : k;
                k2[a][i] = k * k;
                keep[a][i] = std::labs(m) <= cutoff;
            }
        }
    }
};

const WaveTables& tables_for(const Grid& grid) {
    thread_local std::map<std::pair<std::array<std::size_t, 3>, std::array<double, 3>>,
                          std::unique_ptr<WaveTables>>
        cache;
    auto& slot = cache[{grid.dims, grid.box}];
    if (!slot) slot = std::make_unique<WaveTables>(grid);
    return *slot;
}

// ---------------------------------------------------------------------------
// Spectral kernels operating on one strided component.

void spectral_derivative(const Grid& grid, const double* src, std::size_t sstride,
                         std::size_t soff, int axis, double* dst, std::size_t dstride,
                         std::size_t doff) {
    auto& ws = workspace_for(grid);
    const auto& wt = tables_for(grid);
    ws.forward(src, sstride, soff);
    const auto& ka = wt.kd[axis];
    ws.inverse_with_factor(
        [&](std::size_t i1, std::size_t i2, std::size_t i3) -> std::pair<double, double> {
            const std::size_t idx = axis == 0 ? i1 : (axis == 1 ? i2 : i3);
            return {0.0, ka[idx]};  // multiply by i*k
        },
        dst, dstride, doff);
}

/// All three first derivatives of one component with a single forward pass.
void spectral_gradient_component(const Grid& grid, const double* src, std::size_t sstride,
                                 std::size_t soff, double* dst, std::size_t dstride,
                                 const std::array<std::size_t, 3>& doffs) {
    auto& ws = workspace_for(grid);
    const auto& wt = tables_for(grid);
    ws.forward(src, sstride, soff);
    for (int axis = 0; axis < 3; ++axis) {
        const auto& ka = wt.kd[axis];
        ws.inverse_with_factor(
            [&](std::size_t i1, std::size_t i2, std::size_t i3) -> std::pair<double, double> {
                const std::size_t idx = axis == 0 ? i1 : (axis == 1 ? i2 : i3);
                return {0.0, ka[idx]};
            },
            dst, dstride, doffs[axis]);
    }
}

void spectral_laplacian_component(const Grid& grid, const double* src, std::size_t sstride,
                                  std::size_t soff, double* dst, std::size_t dstride,
                                  std::size_t doff) {
    auto& ws = workspace_for(grid);
    const auto& wt = tables_for(grid);
    ws.forward(src, sstride, soff);
    ws.inverse_with_factor(
        [&](std::size_t i1, std::size_t i2, std::size_t i3) -> std::pair<double, double> {
            return {-(wt.k2[0][i1] + wt.k2[1][i2] + wt.k2[2][i3]), 0.0};
        },
        dst, dstride, doff);
}

void spectral_hessian_component(const Grid& grid, const double* src, std::size_t sstride,
                                std::size_t soff, TensorField& out) {
    auto& ws = workspace_for(grid);
    const auto& wt = tables_for(grid);
    ws.forward(src, sstride, soff);
    for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) {
            ws.inverse_with_factor(
                [&](std::size_t i1, std::size_t i2, std::size_t i3) -> std::pair<double, double> {
                    const std::size_t ia = a == 0 ? i1 : (a == 1 ? i2 : i3);
                    const std::size_t ib = b == 0 ? i1 : (b == 1 ? i2 : i3);
                    if (a == b) return {-wt.k2[a][ia], 0.0};
                    return {-wt.kd[a][ia] * wt.kd[b][ib], 0.0};
                },
                out.raw().data(), 9, static_cast<std::size_t>(3 * a + b));
        }
    }
    for (std::size_t n = 0; n < out.nodes(); ++n)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < a; ++b) out.at(n, a, b) = out.at(n, b, a);
}

void spectral_dealias_component(const Grid& grid, double* data, std::size_t stride,
                                std::size_t off) {
    auto& ws = workspace_for(grid);
    const auto& wt = tables_for(grid);
    ws.forward(data, stride, off);
    ws.inverse_with_factor(
        [&](std::size_t i1, std::size_t i2, std::size_t i3) -> std::pair<double, double> {
            const bool keep = wt.keep[0][i1] && wt.keep[1][i2] && wt.keep[2][i3];
            return {keep ? 1.0 : 0.0, 0.0};
        },
        data, stride, off);
}

// ---------------------------------------------------------------------------
// Centered 2nd-order stencils with periodic wrap.

template <typename Fn>
void for_each_node(const Grid& g, Fn&& fn) {
    const auto [n1, n2, n3] = g.dims;
    std::size_t node = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) fn(node, i1, i2, i3);
}

inline std::size_t wrap_up(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }
inline std::size_t wrap_dn(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }

void fd_derivative(const Grid& g, const double* src, std::size_t sstride, std::size_t soff,
                   int axis, double* dst, std::size_t dstride, std::size_t doff) {
    const double inv2h = 1.0 / (2.0 * g.spacing(axis));
    for_each_node(g, [&](std::size_t node, std::size_t i1, std::size_t i2, std::size_t i3) {
        std::size_t up, dn;
        if (axis == 0) {
            up = g.index(wrap_up(i1, g.dims[0]), i2, i3);
            dn = g.index(wrap_dn(i1, g.dims[0]), i2, i3);
        } else if (axis == 1) {
            up = g.index(i1, wrap_up(i2, g.dims[1]), i3);
            dn = g.index(i1, wrap_dn(i2, g.dims[1]), i3);
        } else {
            up = g.index(i1, i2, wrap_up(i3, g.dims[2]));
            dn = g.index(i1, i2, wrap_dn(i3, g.dims[2]));
        }
        dst[node * dstride + doff] = (src[up * sstride + soff] - src[dn * sstride + soff]) * inv2h;
    });
}

void fd_laplacian_component(const Grid& g, const double* src, std::size_t sstride,
                            std::size_t soff, double* dst, std::size_t dstride,
                            std::size_t doff) {
    const double ih2[3] = {1.0 / (g.spacing(0) * g.spacing(0)), 1.0 / (g.spacing(1) * g.spacing(1)),
                           1.0 / (g.spacing(2) * g.spacing(2))};
    for_each_node(g, [&](std::size_t node, std::size_t i1, std::size_t i2, std::size_t i3) {
        const double c = src[node * sstride + soff];
        const double x_up = src[g.index(wrap_up(i1, g.dims[0]), i2, i3) * sstride + soff];
        const double x_dn = src[g.index(wrap_dn(i1, g.dims[0]), i2, i3) * sstride + soff];
        const double y_up = src[g.index(i1, wrap_up(i2, g.dims[1]), i3) * sstride + soff];
        const double y_dn = src[g.index(i1, wrap_dn(i2, g.dims[1]), i3) * sstride + soff];
        const double z_up = src[g.index(i1, i2, wrap_up(i3, g.dims[2])) * sstride + soff];
        const double z_dn = src[g.index(i1, i2, wrap_dn(i3, g.dims[2])) * sstride + soff];
        dst[node * dstride + doff] = (x_up - 2.0 * c + x_dn) * ih2[0] +
                                     (y_up - 2.0 * c + y_dn) * ih2[1] +
                                     (z_up - 2.0 * c + z_dn) * ih2[2];
    });
}

// ---------------------------------------------------------------------------
// Scheme dispatch for one component.

void derivative_component(const Grid& g, CalculusScheme scheme, const double* src,
                          std::size_t sstride, std::size_t soff, int axis, double* dst,
                          std::size_t dstride, std::size_t doff) {
    if (scheme == CalculusScheme::spectral)
        spectral_derivative(g, src, sstride, soff, axis, dst, dstride, doff);
    else
        fd_derivative(g, src, sstride, soff, axis, dst, dstride, doff);
}

void gradient_component(const Grid& g, CalculusScheme scheme, const double* src,
                        std::size_t sstride, std::size_t soff, double* dst, std::size_t dstride,
                        const std::array<std::size_t, 3>& doffs) {
    if (scheme == CalculusScheme::spectral) {
        spectral_gradient_component(g, src, sstride, soff, dst, dstride, doffs);
    } else {
        for (int axis = 0; axis < 3; ++axis)
            fd_derivative(g, src, sstride, soff, axis, dst, dstride, doffs[axis]);
    }
}

void laplacian_component(const Grid& g, CalculusScheme scheme, const double* src,
                         std::size_t sstride, std::size_t soff, double* dst, std::size_t dstride,
                         std::size_t doff) {
    if (scheme == CalculusScheme::spectral)
        spectral_laplacian_component(g, src, sstride, soff, dst, dstride, doff);
    else
        fd_laplacian_component(g, src, sstride, soff, dst, dstride, doff);
}

template <std::size_t NC>
void dealias_impl(BasicField<NC>& f, CalculusScheme scheme) {
    if (scheme != CalculusScheme::spectral) return;
    for (std::size_t c = 0; c < NC; ++c)
        spectral_dealias_component(f.grid(), f.raw().data(), NC, c);
}

double magnitude_pow(double msq, double p) {
    if (p == 2.0) return msq;
    if (p == 4.0) return msq * msq;
    if (p == 6.0) return msq * msq * msq;
    if (p == 1.0) return std::sqrt(msq);
    if (p == 3.0) return msq * std::sqrt(msq);
    return std::pow(msq, 0.5 * p);
}

template <std::size_t NC>
double lp_norm_impl(const BasicField<NC>& f, double p) {
    f.require_finite("lp_norm input");
    const bool inf = std::isinf(p) && p > 0.0;
    if (!inf && !(p >= 1.0 && std::isfinite(p)))
        throw ConfigError("lp_norm: p must be >= 1 or infinity");
    if (inf) {
        double worst = 0.0;
        for (std::size_t n = 0; n < f.nodes(); ++n) {
            const double m = std::sqrt(f.magnitude_sq(n));
            if (m > worst) worst = m;
        }
        return worst;
    }
    const double total =
        pairwise_sum_indexed(f.nodes(), [&](std::size_t n) { return magnitude_pow(f.magnitude_sq(n), p); });
    return std::pow(total * f.grid().cell_volume(), 1.0 / p);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operators.

VectorField gradient(const ScalarField& f, CalculusScheme scheme) {
    f.require_finite("gradient input");
    VectorField out(f.grid());
    gradient_component(f.grid(), scheme, f.raw().data(), 1, 0, out.raw().data(), 3, {0, 1, 2});
    return out;
}

TensorField gradient(const VectorField& u, CalculusScheme scheme) {
    u.require_finite("gradient input");
    TensorField out(u.grid());
    // G_ij = d_i u_j: component j of u feeds tensor column j.
    for (std::size_t j = 0; j < 3; ++j)
        gradient_component(u.grid(), scheme, u.raw().data(), 3, j, out.raw().data(), 9,
                           {0 + j, 3 + j, 6 + j});
    return out;
}

TensorField gradient(const DirectorField& d, CalculusScheme scheme) {
    d.require_finite("gradient input");
    TensorField out(d.grid());
    for (std::size_t j = 0; j < 3; ++j)
        gradient_component(d.grid(), scheme, d.raw().data(), 3, j, out.raw().data(), 9,
                           {0 + j, 3 + j, 6 + j});
    return out;
}

namespace {

/// Sum of d_axis(component src_offs[axis]) computed with one inverse
/// transform in spectral mode.
void divergence_sum(const Grid& g, CalculusScheme scheme, const double* src,
                    std::size_t sstride, const std::array<std::size_t, 3>& src_offs,
                    double* dst, std::size_t dstride, std::size_t doff) {
    if (scheme == CalculusScheme::spectral) {
        auto& ws = workspace_for(g);
        const auto& wt = tables_for(g);
        ws.clear_accumulator();
        for (int axis = 0; axis < 3; ++axis) {
            ws.forward(src, sstride, src_offs[axis]);
            const auto& ka = wt.kd[axis];
            ws.accumulate_with_factor(
                [&](std::size_t i1, std::size_t i2, std::size_t i3) -> std::pair<double, double> {
                    const std::size_t idx = axis == 0 ? i1 : (axis == 1 ? i2 : i3);
                    return {0.0, ka[idx]};
                });
        }
        ws.inverse_from_accumulator(dst, dstride, doff);
        return;
    }
    const std::size_t ntot = g.node_count();
    std::vector<double> part(ntot);
    for (int axis = 0; axis < 3; ++axis) {
        fd_derivative(g, src, sstride, src_offs[axis], axis, part.data(), 1, 0);
        if (axis == 0)
            for (std::size_t n = 0; n < ntot; ++n) dst[n * dstride + doff] = part[n];
        else
            for (std::size_t n = 0; n < ntot; ++n) dst[n * dstride + doff] += part[n];
    }
}

}  // namespace

ScalarField divergence(const VectorField& v, CalculusScheme scheme) {
    v.require_finite("divergence input");
    ScalarField out(v.grid());
    divergence_sum(v.grid(), scheme, v.raw().data(), 3, {0, 1, 2}, out.raw().data(), 1, 0);
    return out;
}

VectorField divergence(const TensorField& t, CalculusScheme scheme) {
    t.require_finite("divergence input");
    VectorField out(t.grid());
    for (std::size_t i = 0; i < 3; ++i)
        divergence_sum(t.grid(), scheme, t.raw().data(), 9, {0 + i, 3 + i, 6 + i},
                       out.raw().data(), 3, i);
    return out;
}

VectorField curl(const VectorField& v, CalculusScheme scheme) {
    v.require_finite("curl input");
    VectorField out(v.grid());
    ScalarField da(v.grid()), db(v.grid());
    // (curl v)_i = d_j v_k - d_k v_j for cyclic (i,j,k).
    const int idx[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& [i, j, k] : idx) {
        derivative_component(v.grid(), scheme, v.raw().data(), 3, static_cast<std::size_t>(k), j,
                             da.raw().data(), 1, 0);
        derivative_component(v.grid(), scheme, v.raw().data(), 3, static_cast<std::size_t>(j), k,
                             db.raw().data(), 1, 0);
        for (std::size_t n = 0; n < out.nodes(); ++n)
            out(n, static_cast<std::size_t>(i)) = da[n] - db[n];
    }
    return out;
}

ScalarField laplacian(const ScalarField& f, CalculusScheme scheme) {
    f.require_finite("laplacian input");
    ScalarField out(f.grid());
    laplacian_component(f.grid(), scheme, f.raw().data(), 1, 0, out.raw().data(), 1, 0);
    return out;
}

VectorField laplacian(const VectorField& v, CalculusScheme scheme) {
    v.require_finite("laplacian input");
    VectorField out(v.grid());
    for (std::size_t c = 0; c < 3; ++c)
        laplacian_component(v.grid(), scheme, v.raw().data(), 3, c, out.raw().data(), 3, c);
    return out;
}

VectorField laplacian(const DirectorField& d, CalculusScheme scheme) {
    d.require_finite("laplacian input");
    VectorField out(d.grid());
    for (std::size_t c = 0; c < 3; ++c)
        laplacian_component(d.grid(), scheme, d.raw().data(), 3, c, out.raw().data(), 3, c);
    return out;
}

TensorField hessian(const ScalarField& f, CalculusScheme scheme) {
    f.require_finite("hessian input");
    TensorField out(f.grid());
    if (scheme == CalculusScheme::spectral) {
        spectral_hessian_component(f.grid(), f.raw().data(), 1, 0, out);
    } else {
        VectorField g = gradient(f, scheme);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                fd_derivative(f.grid(), g.raw().data(), 3, static_cast<std::size_t>(b), a,
                              out.raw().data(), 9, static_cast<std::size_t>(3 * a + b));
    }
    return out;
}

void dealias(ScalarField& f, CalculusScheme scheme) { dealias_impl(f, scheme); }
void dealias(VectorField& v, CalculusScheme scheme) { dealias_impl(v, scheme); }

ScalarField spectral_mode_filter(const ScalarField& f,
                                 const std::function<double(long, long, long)>& weight) {
    f.require_finite("spectral_mode_filter input");
    const Grid& grid = f.grid();
    auto& ws = workspace_for(grid);
    auto signed_mode = [](std::size_t i, std::size_t n) {
        long m = static_cast<long>(i);
        if (m > static_cast<long>(n / 2)) m -= static_cast<long>(n);
        return m;
    };
    ScalarField out(grid);
    ws.forward(f.raw().data(), 1, 0);
    ws.inverse_with_factor(
        [&](std::size_t i1, std::size_t i2, std::size_t i3) -> std::pair<double, double> {
            return {weight(signed_mode(i1, grid.dims[0]), signed_mode(i2, grid.dims[1]),
                           signed_mode(i3, grid.dims[2])),
                    0.0};
        },
        out.raw().data(), 1, 0);
    return out;
}

TensorField deformation_from_gradient(const TensorField& g) {
    TensorField out(g.grid());
    for (std::size_t n = 0; n < out.nodes(); ++n) {
        for (std::size_t i = 0; i < 3; ++i) {
            out.at(n, i, i) = g.at(n, i, i);
            for (std::size_t j = i + 1; j < 3; ++j) {
                const double s = 0.5 * (g.at(n, i, j) + g.at(n, j, i));
                out.at(n, i, j) = s;
                out.at(n, j, i) = s;
            }
        }
    }
    return out;
}

TensorField deformation_tensor(const VectorField& u, CalculusScheme scheme) {
    return deformation_from_gradient(gradient(u, scheme));
}

ScalarField dot_field(const VectorField& a, const VectorField& b) {
    require_same_grid(a, b, "dot_field");
    a.require_finite("dot_field input");
    b.require_finite("dot_field input");
    ScalarField out(a.grid());
    for (std::size_t n = 0; n < out.nodes(); ++n)
        out[n] = a(n, 0) * b(n, 0) + a(n, 1) * b(n, 1) + a(n, 2) * b(n, 2);
    return out;
}

TensorField outer_from_gradient(const TensorField& g) {
    TensorField out(g.grid());
    for (std::size_t n = 0; n < out.nodes(); ++n) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i; j < 3; ++j) {
                double s = 0.0;
                for (std::size_t c = 0; c < 3; ++c) s += g.at(n, i, c) * g.at(n, j, c);
                out.at(n, i, j) = s;
                out.at(n, j, i) = s;
            }
        }
    }
    return out;
}

TensorField grad_outer_product(const DirectorField& d, CalculusScheme scheme) {
    return outer_from_gradient(gradient(d, scheme));
}

double lp_norm(const ScalarField& f, double p) { return lp_norm_impl(f, p); }
double lp_norm(const VectorField& f, double p) { return lp_norm_impl(f, p); }
double lp_norm(const TensorField& f, double p) { return lp_norm_impl(f, p); }
double lp_norm(const DirectorField& f, double p) { return lp_norm_impl(f, p); }

double lp_norm_grad(const ScalarField& f, double p, CalculusScheme scheme) {
    return lp_norm(gradient(f, scheme), p);
}
double lp_norm_grad(const VectorField& f, double p, CalculusScheme scheme) {
    return lp_norm(gradient(f, scheme), p);
}
double lp_norm_grad(const DirectorField& f, double p, CalculusScheme scheme) {
    return lp_norm(gradient(f, scheme), p);
}

namespace {

template <std::size_t NC>
double second_gradient_l2_impl(const BasicField<NC>& f, CalculusScheme scheme) {
    ScalarField comp(f.grid());
    double total = 0.0;
    for (std::size_t c = 0; c < NC; ++c) {
        for (std::size_t n = 0; n < f.nodes(); ++n) comp[n] = f(n, c);
        TensorField h = hessian(comp, scheme);
        const double norm = lp_norm(h, 2.0);
        total += norm * norm;
    }
    return std::sqrt(total);
}

}  // namespace

double second_gradient_l2(const VectorField& f, CalculusScheme scheme) {
    return second_gradient_l2_impl(f, scheme);
}
double second_gradient_l2(const DirectorField& f, CalculusScheme scheme) {
    return second_gradient_l2_impl(f, scheme);
}
double second_gradient_l2(const ScalarField& f, CalculusScheme scheme) {
    return second_gradient_l2_impl(f, scheme);
}

double inner_product(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "inner_product");
    const double total =
        pairwise_sum_indexed(a.nodes(), [&](std::size_t n) { return a[n] * b[n]; });
    return total * a.grid().cell_volume();
}

double inner_product(const VectorField& a, const VectorField& b) {
    require_same_grid(a, b, "inner_product");
    const double total = pairwise_sum_indexed(a.nodes(), [&](std::size_t n) {
        return a(n, 0) * b(n, 0) + a(n, 1) * b(n, 1) + a(n, 2) * b(n, 2);
    });
    return total * a.grid().cell_volume();
}

}  // namespace elc
