"""Numba-compiled numerical cores.

Everything here operates on plain floats and 1-D float64 arrays so the whole
fit (filter, residuals, bandwidth, kernel-density likelihood, simplex search)
runs in nopython mode.  The Python-facing modules wrap these cores with
validation and friendlier types.

Distributions are passed as a small float64 "pack":

    pack[0]  family code (0 gaussian, 1 ged, 2 student-t)
    pack[1]  shape (ged nu or t df; 0.0 for gaussian)
    pack[2]  skewness xi (1.0 = symmetric)
    pack[3]  skew re-centering mu
    pack[4]  skew re-scaling sigma
    pack[5]  ged lambda (1.0 otherwise)
    pack[6]  additive constant of the base log-density
    pack[7]  additive constant of the skew transform (0.0 when xi = 1)

Models are passed as an integer code with parameters in a fixed-length
vector p4 = (omega, alpha, gamma, beta); gamma is ignored for GARCH(1,1).
"""

import math

import numpy as np
from numba import njit

MODEL_GARCH11 = 0
MODEL_GJR11 = 1
MODEL_EGARCH11 = 2

METHOD_QMLE = 0
METHOD_SMLE = 1

DIST_GAUSSIAN = 0
DIST_GED = 1
DIST_T = 2

# stationarity margin of the fitting reparameterization
DELTA = 1e-4

LOG_FLOOR = math.log(1e-300)
SQRT_2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# volatility filters
# ---------------------------------------------------------------------------

@njit(cache=True)
def garch11_filter_core(y, omega, alpha, beta, sigma1_sq):
    n = y.shape[0]
    sig2 = np.empty(n)
    sig2[0] = sigma1_sq
    for t in range(1, n):
        sig2[t] = omega + alpha * y[t - 1] * y[t - 1] + beta * sig2[t - 1]
    return sig2


@njit(cache=True)
def gjr11_filter_core(y, omega, alpha, gamma, beta, sigma1_sq):
    n = y.shape[0]
    sig2 = np.empty(n)
    sig2[0] = sigma1_sq
    for t in range(1, n):
        a = alpha + gamma if y[t - 1] < 0.0 else alpha
        sig2[t] = omega + a * y[t - 1] * y[t - 1] + beta * sig2[t - 1]
    return sig2


@njit(cache=True)
def egarch11_filter_core(y, omega, alpha, gamma, beta, sigma1_sq, e_abs_z):
    n = y.shape[0]
    sig2 = np.empty(n)
    sig2[0] = sigma1_sq
    log_s2 = math.log(sigma1_sq)
    for t in range(1, n):
        z = y[t - 1] / math.sqrt(sig2[t - 1])
        log_s2 = omega + alpha * (abs(z) - e_abs_z) + gamma * z + beta * log_s2
        sig2[t] = math.exp(log_s2)
    return sig2


@njit(cache=True)
def garch_pq_filter_core(y, omega, alphas, betas, sigma1_sq):
    # flat backcast: presample y^2 and sigma^2 terms are sigma1_sq
    n = y.shape[0]
    p = alphas.shape[0]
    q = betas.shape[0]
    sig2 = np.empty(n)
    for t in range(n):
        s = omega
        for i in range(p):
            k = t - 1 - i
            s += alphas[i] * (y[k] * y[k] if k >= 0 else sigma1_sq)
        for j in range(q):
            k = t - 1 - j
            s += betas[j] * (sig2[k] if k >= 0 else sigma1_sq)
        sig2[t] = s
    return sig2


@njit(cache=True)
def filter_dispatch(model_code, y, p4, sigma1_sq, e_abs_z):
    if model_code == MODEL_GARCH11:
        return garch11_filter_core(y, p4[0], p4[1], p4[3], sigma1_sq)
    if model_code == MODEL_GJR11:
        return gjr11_filter_core(y, p4[0], p4[1], p4[2], p4[3], sigma1_sq)
    return egarch11_filter_core(y, p4[0], p4[1], p4[2], p4[3], sigma1_sq, e_abs_z)


# ---------------------------------------------------------------------------
# innovation log-densities
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _base_logpdf(z, code, shape, lam, log_const):
    if code == DIST_GAUSSIAN:
        return log_const - 0.5 * z * z
    if code == DIST_GED:
        return log_const - 0.5 * abs(z / lam) ** shape
    return log_const - 0.5 * (shape + 1.0) * math.log1p(z * z / (shape - 2.0))


@njit(cache=True, inline="always")
def logpdf_std(z, pack):
    code = int(pack[0])
    if pack[2] == 1.0:
        return _base_logpdf(z, code, pack[1], pack[5], pack[6])
    zr = pack[3] + pack[4] * z
    zz = zr / pack[2] if zr >= 0.0 else zr * pack[2]
    return pack[7] + _base_logpdf(zz, code, pack[1], pack[5], pack[6])


# ---------------------------------------------------------------------------
# objectives
# ---------------------------------------------------------------------------

@njit(cache=True)
def qmle_neg2ll_core(y, model_code, p4, pack, sigma1_sq, e_abs_z):
    """-2 x sum_t log[(1/sigma_t) f(y_t/sigma_t)] with parametric f.

    Returns (value, floored-term count); value is +inf when the filter
    degenerates or more than 10% of density terms hit the floor.
    """
    n = y.shape[0]
    sig2 = filter_dispatch(model_code, y, p4, sigma1_sq, e_abs_z)
    ll = 0.0
    n_floored = 0
    for t in range(n):
        s2 = sig2[t]
        if not (s2 > 0.0) or not math.isfinite(s2):
            return np.inf, 0
        z = y[t] / math.sqrt(s2)
        lp = logpdf_std(z, pack)
        if lp < LOG_FLOOR or math.isnan(lp):
            lp = LOG_FLOOR
            n_floored += 1
        ll += lp - 0.5 * math.log(s2)
    if n_floored * 10 > n:
        return np.inf, n_floored
    if not math.isfinite(ll):
        return np.inf, n_floored
    return -2.0 * ll, n_floored


@njit(cache=True, inline="always")
def _quantile_sorted(xs, q):
    # numpy's 'linear' (type-7) interpolation on an already-sorted array
    n = xs.shape[0]
    idx = q * (n - 1)
    lo = int(math.floor(idx))
    if lo >= n - 1:
        return xs[n - 1]
    frac = idx - lo
    return xs[lo] + frac * (xs[lo + 1] - xs[lo])


@njit(cache=True)
def nrd_bandwidth_core(x, constant):
    """Rule-of-thumb bandwidth; returns 0.0 on degenerate data."""
    n = x.shape[0]
    if n < 2:
        return 0.0
    m = 0.0
    for i in range(n):
        m += x[i]
    m /= n
    ss = 0.0
    for i in range(n):
        d = x[i] - m
        ss += d * d
    sd = math.sqrt(ss / (n - 1))
    xs = np.sort(x)
    iqr = _quantile_sorted(xs, 0.75) - _quantile_sorted(xs, 0.25)
    a = min(sd, iqr / 1.34)
    if not (a > 0.0) or not math.isfinite(a):
        return 0.0
    return constant * a * n ** (-0.2)


@njit(cache=True, fastmath=True)
def kde_self_loglik(pts, h):
    """sum_j log max(fhat(p_j), 1e-300) for the Gaussian KDE built on pts.

    Exact O(n^2) pair sum using symmetry.  Also returns the floored count.
    """
    n = pts.shape[0]
    u = pts / h
    s = np.ones(n)  # diagonal i == j contributes exp(0)
    for j in range(n):
        uj = u[j]
        for i in range(j + 1, n):
            t = uj - u[i]
            e = np.exp(-0.5 * t * t)
            s[j] += e
            s[i] += e
    c = 1.0 / (n * h * SQRT_2PI)
    tot = 0.0
    n_floored = 0
    for j in range(n):
        fj = c * s[j]
        if fj < 1e-300:
            fj = 1e-300
            n_floored += 1
        tot += math.log(fj)
    return tot, n_floored


@njit(cache=True)
def smle_neg2ll_core(y, omega, alpha, beta, sigma1_sq, nrd_constant, h_override):
    """One-step semiparametric -2 log-likelihood for GARCH(1,1).

    Pipeline per evaluation: filter -> residuals -> standardize ->
    rule-of-thumb bandwidth -> Gaussian KDE of the standardized residuals,
    evaluated at those same standardized residuals with the location-scale
    correction log(sigma_t * s) so the sum is a genuine density of y.
    ``h_override > 0`` fixes the bandwidth instead of the rule of thumb.
    """
    n = y.shape[0]
    sig2 = garch11_filter_core(y, omega, alpha, beta, sigma1_sq)
    eps = np.empty(n)
    log_sig_sum = 0.0
    for t in range(n):
        s2 = sig2[t]
        if not (s2 > 0.0) or not math.isfinite(s2):
            return np.inf, 0
        eps[t] = y[t] / math.sqrt(s2)
        log_sig_sum += 0.5 * math.log(s2)
    m = 0.0
    for t in range(n):
        m += eps[t]
    m /= n
    ss = 0.0
    for t in range(n):
        d = eps[t] - m
        ss += d * d
    s = math.sqrt(ss / (n - 1))
    if not (s > 0.0) or not math.isfinite(s):
        return np.inf, 0
    eps_std = (eps - m) / s
    h = h_override if h_override > 0.0 else nrd_bandwidth_core(eps_std, nrd_constant)
    if not (h > 0.0) or not math.isfinite(h):
        return np.inf, 0
    kll, n_floored = kde_self_loglik(eps_std, h)
    if n_floored * 10 > n:
        return np.inf, n_floored
    ll = kll - log_sig_sum - n * math.log(s)
    if not math.isfinite(ll):
        return np.inf, n_floored
    return -2.0 * ll, n_floored


# ---------------------------------------------------------------------------
# parameter reparameterization (unconstrained u -> constrained model params)
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _sigmoid(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@njit(cache=True)
def u_to_params(model_code, u):
    """Map unconstrained coordinates into the model's admissible region."""
    p4 = np.zeros(4)
    if model_code == MODEL_GARCH11:
        s = (1.0 - DELTA) * _sigmoid(u[1])
        a = _sigmoid(u[2])
        p4[0] = math.exp(u[0])
        p4[1] = s * a
        p4[3] = s * (1.0 - a)
    elif model_code == MODEL_GJR11:
        # persistence alpha + gamma/2 + beta = s, split three ways by softmax
        s = (1.0 - DELTA) * _sigmoid(u[1])
        e2 = math.exp(u[2])
        e3 = math.exp(u[3])
        den = e2 + e3 + 1.0
        p4[0] = math.exp(u[0])
        p4[1] = s * e2 / den
        p4[2] = 2.0 * s * e3 / den
        p4[3] = s / den
    else:
        p4[0] = u[0]
        p4[1] = u[1]
        p4[2] = u[2]
        p4[3] = (1.0 - DELTA) * math.tanh(u[3])
    return p4


@njit(cache=True)
def fit_objective(u, method_code, model_code, y, pack, sigma1_sq, nrd_constant,
                  h_override, e_abs_z):
    p4 = u_to_params(model_code, u)
    for k in range(4):
        if not math.isfinite(p4[k]):
            return np.inf
    if method_code == METHOD_SMLE:
        v, _ = smle_neg2ll_core(y, p4[0], p4[1], p4[3], sigma1_sq,
                                nrd_constant, h_override)
        return v
    v, _ = qmle_neg2ll_core(y, model_code, p4, pack, sigma1_sq, e_abs_z)
    return v


# ---------------------------------------------------------------------------
# Nelder-Mead simplex search
# ---------------------------------------------------------------------------

@njit(cache=True)
def _insertion_sort_simplex(sim, fsim):
    # stable sort of the (d+1) vertices by objective value
    m = fsim.shape[0]
    for i in range(1, m):
        fv = fsim[i]
        row = sim[i].copy()
        j = i - 1
        while j >= 0 and fsim[j] > fv:
            fsim[j + 1] = fsim[j]
            sim[j + 1] = sim[j]
            j -= 1
        fsim[j + 1] = fv
        sim[j + 1] = row


@njit(cache=True)
def nelder_mead(u0, method_code, model_code, y, pack, sigma1_sq, nrd_constant,
                h_override, e_abs_z, fatol, xatol, maxfev):
    """Minimize fit_objective from u0.

    Converged when both the objective spread and the simplex diameter fall
    below fatol / xatol.  Returns (u_best, f_best, nfev, converged).
    """
    d = u0.shape[0]
    sim = np.empty((d + 1, d))
    fsim = np.empty(d + 1)
    sim[0] = u0
    for k in range(d):
        v = u0.copy()
        if v[k] != 0.0:
            v[k] *= 1.05
        else:
            v[k] = 0.00025
        sim[k + 1] = v
    nfev = 0
    for i in range(d + 1):
        fsim[i] = fit_objective(sim[i], method_code, model_code, y, pack,
                                sigma1_sq, nrd_constant, h_override, e_abs_z)
        nfev += 1
    _insertion_sort_simplex(sim, fsim)

    converged = False
    while nfev < maxfev:
        span_f = 0.0
        span_x = 0.0
        for i in range(1, d + 1):
            df = abs(fsim[i] - fsim[0])
            if df > span_f:
                span_f = df
            for k in range(d):
                dx = abs(sim[i, k] - sim[0, k])
                if dx > span_x:
                    span_x = dx
        if span_f <= fatol and span_x <= xatol:
            converged = True
            break

        xbar = np.zeros(d)
        for i in range(d):
            for k in range(d):
                xbar[k] += sim[i, k]
        xbar /= d

        xr = 2.0 * xbar - sim[d]
        fxr = fit_objective(xr, method_code, model_code, y, pack, sigma1_sq,
                            nrd_constant, h_override, e_abs_z)
        nfev += 1
        shrink = False
        if fxr < fsim[0]:
            xe = 3.0 * xbar - 2.0 * sim[d]
            fxe = fit_objective(xe, method_code, model_code, y, pack, sigma1_sq,
                                nrd_constant, h_override, e_abs_z)
            nfev += 1
            if fxe < fxr:
                sim[d] = xe
                fsim[d] = fxe
            else:
                sim[d] = xr
                fsim[d] = fxr
        elif fxr < fsim[d - 1]:
            sim[d] = xr
            fsim[d] = fxr
        elif fxr < fsim[d]:
            xc = 1.5 * xbar - 0.5 * sim[d]
            fxc = fit_objective(xc, method_code, model_code, y, pack, sigma1_sq,
                                nrd_constant, h_override, e_abs_z)
            nfev += 1
            if fxc <= fxr:
                sim[d] = xc
                fsim[d] = fxc
            else:
                shrink = True
        else:
            xcc = 0.5 * xbar + 0.5 * sim[d]
            fxcc = fit_objective(xcc, method_code, model_code, y, pack,
                                 sigma1_sq, nrd_constant, h_override, e_abs_z)
            nfev += 1
            if fxcc < fsim[d]:
                sim[d] = xcc
                fsim[d] = fxcc
            else:
                shrink = True
        if shrink:
            for i in range(1, d + 1):
                sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
                fsim[i] = fit_objective(sim[i], method_code, model_code, y,
                                        pack, sigma1_sq, nrd_constant,
                                        h_override, e_abs_z)
                nfev += 1
        _insertion_sort_simplex(sim, fsim)

    return sim[0], fsim[0], nfev, converged


# ---------------------------------------------------------------------------
# simulation recursion
# ---------------------------------------------------------------------------

@njit(cache=True)
def segment_recursion(model_code, p4, eps, y_prev, sig2_prev, init_sig2,
                      use_init, e_abs_z):
    """Run one DGP segment, continuing from (y_prev, sig2_prev) state.

    With use_init, the first observation uses init_sig2 directly instead of
    the recursion (start of the whole simulated path).  Returns the segment's
    returns and variance path; the caller reads the final state off the ends.
    """
    m = eps.shape[0]
    y = np.empty(m)
    sig2 = np.empty(m)
    yp = y_prev
    s2p = sig2_prev
    for t in range(m):
        if t == 0 and use_init:
            s2 = init_sig2
        elif model_code == MODEL_GARCH11:
            s2 = p4[0] + p4[1] * yp * yp + p4[3] * s2p
        elif model_code == MODEL_GJR11:
            a = p4[1] + p4[2] if yp < 0.0 else p4[1]
            s2 = p4[0] + a * yp * yp + p4[3] * s2p
        else:
            z = yp / math.sqrt(s2p)
            s2 = math.exp(p4[0] + p4[1] * (abs(z) - e_abs_z) + p4[2] * z
                          + p4[3] * math.log(s2p))
        sig2[t] = s2
        yt = math.sqrt(s2) * eps[t]
        y[t] = yt
        yp = yt
        s2p = s2
    return y, sig2
