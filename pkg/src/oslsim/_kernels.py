"""Hot numeric kernels: radial symbol quadrature and jump-SDE path generation.

Every kernel is written in nopython-compatible numpy and compiled with numba
unless the environment variable ``OSLSIM_NO_NUMBA`` is set to a truthy value,
in which case the same functions run as plain numpy/python (identical
numerics, much slower).  ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

import numpy as np

_FALLBACK = os.environ.get("OSLSIM_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

if not _FALLBACK:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover
        _FALLBACK = True

NUMBA_ENABLED = not _FALLBACK


def _jit(f):
    if NUMBA_ENABLED:
        return _njit(cache=True)(f)
    # integer wraparound in the splitmix64 stream is intentional
    return np.errstate(over="ignore")(f)


# ---------------------------------------------------------------------------
# counter-based per-path RNG (splitmix64)
# ---------------------------------------------------------------------------

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_M2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0  # 2**-53


@_jit
def sm64_mix(z):
    z = (z ^ (z >> np.uint64(30))) * _SM_M1
    z = (z ^ (z >> np.uint64(27))) * _SM_M2
    return z ^ (z >> np.uint64(31))


@_jit
def stream_init(seed, index):
    """Independent stream state for path `index` under master `seed`."""
    base = sm64_mix(np.uint64(seed) + _SM_GAMMA)
    return sm64_mix(base ^ ((np.uint64(index) + np.uint64(1)) * _SM_GAMMA))


@_jit
def stream_next(state):
    """Advance; returns (new_state, uniform in [0, 1))."""
    state = state + _SM_GAMMA
    z = sm64_mix(state)
    return state, float(z >> np.uint64(11)) * _U53


# ---------------------------------------------------------------------------
# phase c(r) = sum_j p_j r^{a_j} and derivatives
# ---------------------------------------------------------------------------


@_jit
def _c_val(p, a, r):
    s = 0.0
    for j in range(p.shape[0]):
        s += p[j] * r ** a[j]
    return s


@_jit
def _c_d1(p, a, r):
    s = 0.0
    for j in range(p.shape[0]):
        s += p[j] * a[j] * r ** (a[j] - 1.0)
    return s


@_jit
def _c_d2(p, a, r):
    s = 0.0
    for j in range(p.shape[0]):
        s += p[j] * a[j] * (a[j] - 1.0) * r ** (a[j] - 2.0)
    return s


# 15-point Kronrod / 7-point Gauss pair
_XGK = np.array(
    [
        0.991455371120813,
        0.949107912342759,
        0.864864423359769,
        0.741531185599394,
        0.586087235467691,
        0.405845151377397,
        0.207784955007898,
        0.0,
    ]
)
_WGK = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
    ]
)
_WG = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
    ]
)

# integrand types on u = ln r
_FT_ONE_MINUS_COS = 0  # (1 - cos c(e^u)) e^{-u}
_FT_C_MINUS_SIN = 1  # (c - sin c)(e^u) e^{-u}
_FT_NEG_SIN = 2  # -sin(c(e^u)) e^{-u}
_FT_COS = 3  # cos(c(e^u)) e^{-u}
_FT_SIN = 4  # sin(c(e^u)) e^{-u}


@_jit
def _eval_integrand(p, a, u, ftype):
    r = np.exp(u)
    c = _c_val(p, a, r)
    if ftype == 0:
        return (1.0 - np.cos(c)) * np.exp(-u)
    elif ftype == 1:
        return (c - np.sin(c)) * np.exp(-u)
    elif ftype == 2:
        return -np.sin(c) * np.exp(-u)
    elif ftype == 3:
        return np.cos(c) * np.exp(-u)
    else:
        return np.sin(c) * np.exp(-u)


@_jit
def _gk15(p, a, lo, hi, ftype):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = _eval_integrand(p, a, mid, ftype)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for i in range(7):
        x = half * _XGK[i]
        f1 = _eval_integrand(p, a, mid - x, ftype)
        f2 = _eval_integrand(p, a, mid + x, ftype)
        kron += _WGK[i] * (f1 + f2)
        if i % 2 == 1:
            gauss += _WG[(i - 1) // 2] * (f1 + f2)
    kron *= half
    gauss *= half
    return kron, abs(kron - gauss)


@_jit
def _adaptive(p, a, ua, ub, tol_abs, max_intervals, ftype):
    """Locally adaptive GK15 on [ua, ub]; returns (value, error_estimate)."""
    if ub <= ua:
        return 0.0, 0.0
    cap = 2 * max_intervals + 64
    st_lo = np.empty(cap)
    st_hi = np.empty(cap)
    sp = 1
    st_lo[0] = ua
    st_hi[0] = ub
    total = 0.0
    errsum = 0.0
    used = 0
    span = ub - ua
    while sp > 0:
        sp -= 1
        lo = st_lo[sp]
        hi = st_hi[sp]
        val, err = _gk15(p, a, lo, hi, ftype)
        ok = err <= tol_abs * (hi - lo) / span
        if ok or (hi - lo) < 1e-13 or used >= max_intervals or sp + 2 >= cap:
            total += val
            errsum += err
        else:
            used += 1
            mid = 0.5 * (lo + hi)
            st_lo[sp] = lo
            st_hi[sp] = mid
            st_lo[sp + 1] = mid
            st_hi[sp + 1] = hi
            sp += 2
    return total, errsum


@_jit
def _c_d3(p, a, r):
    s = 0.0
    for j in range(p.shape[0]):
        s += p[j] * a[j] * (a[j] - 1.0) * (a[j] - 2.0) * r ** (a[j] - 3.0)
    return s


@_jit
def _tail_coeffs(p, a, r):
    """Boundary coefficients of the repeated integration by parts at r."""
    c1 = _c_d1(p, a, r)
    c2 = _c_d2(p, a, r)
    c3 = _c_d3(p, a, r)
    g1 = 1.0 / (r * r * c1)
    g1p = -2.0 / (r**3 * c1) - c2 / (r * r * c1 * c1)
    g2 = g1p / c1
    g2p = (
        6.0 / (r**4 * c1**2)
        + 6.0 * c2 / (r**3 * c1**3)
        - c3 / (r * r * c1**3)
        + 3.0 * c2 * c2 / (r * r * c1**4)
    )
    g3 = g2p / c1
    return g1, g2, g3


@_jit
def _tail_tv_g3(p, a, r):
    """Total-variation estimate of g3 on [r, inf) via geometric sampling."""
    tv = 0.0
    _, _, prev = _tail_coeffs(p, a, r)
    rr = r
    for _ in range(30):
        rr *= 1.6
        _, _, g3 = _tail_coeffs(p, a, rr)
        tv += abs(g3 - prev)
        prev = g3
    return tv + abs(prev)


@_jit
def _crit_points(p, a, rlo, rhi, roots):
    """Roots of c'(r) on [rlo, rhi], ascending; fills `roots`, returns count.

    c' is an exponential sum with at most len(p) - 1 positive roots; a log-
    spaced sign scan followed by bisection finds them.
    """
    if rhi <= rlo or p.shape[0] < 2:
        return 0
    n_scan = 600
    ulo = np.log(rlo)
    uhi = np.log(rhi)
    cnt = 0
    prev_u = ulo
    prev_f = _c_d1(p, a, rlo)
    for i in range(1, n_scan + 1):
        u = ulo + (uhi - ulo) * i / n_scan
        f = _c_d1(p, a, np.exp(u))
        if prev_f * f < 0.0:
            lo = prev_u
            hi = u
            flo = prev_f
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                fm = _c_d1(p, a, np.exp(mid))
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo = mid
                    flo = fm
            if cnt < roots.shape[0]:
                roots[cnt] = np.exp(0.5 * (lo + hi))
                cnt += 1
        prev_f = f
        prev_u = u
    return cnt


@_jit
def _seg_tv_g3(p, a, A, B):
    """Total-variation estimate of g3 on [A, B] by geometric sampling."""
    tv = 0.0
    _, _, prev = _tail_coeffs(p, a, A)
    first = abs(prev)
    steps = 40
    ratio = (B / A) ** (1.0 / steps)
    r = A
    for _ in range(steps):
        r *= ratio
        _, _, g3 = _tail_coeffs(p, a, r)
        tv += abs(g3 - prev)
        prev = g3
    return 1.5 * tv + first + abs(prev)


@_jit
def _osc_antideriv(p, a, r, trig):
    """F with int_A^B trig(c)/r^2 dr = F(B) - F(A) up to the g3 remainder."""
    g1, g2, g3 = _tail_coeffs(p, a, r)
    c = _c_val(p, a, r)
    if trig == 0:
        return (g1 - g3) * np.sin(c) + g2 * np.cos(c)
    return -(g1 - g3) * np.cos(c) + g2 * np.sin(c)


_OSC_PHASE_ADAPTIVE = 2000.0  # below this phase change a segment goes to GK15


@_jit
def _osc_int(p, a, rlo, rhi, trig, tol_abs, max_intervals):
    """int_rlo^rhi trig(c(r)) / r^2 dr for trig in {0: cos, 1: sin}.

    The range is split at stationary points of the phase; a window around
    each stationary point (bounded phase change) and any slowly-oscillating
    segment are integrated adaptively, fast-oscillating segments are resummed
    by endpoint integration by parts with a total-variation error estimate.
    """
    if rhi <= rlo:
        return 0.0, 0.0
    roots = np.empty(8)
    ncrit = _crit_points(p, a, rlo, rhi, roots)
    # breakpoints: [rlo, (window edges)..., rhi]; windows marked adaptive
    bnd = np.empty(2 * ncrit + 2)
    bnd[0] = rlo
    nb = 1
    for k in range(ncrit):
        rs = roots[k]
        c2 = abs(_c_d2(p, a, rs))
        if c2 < 1e-300:
            h = rhi - rlo
        else:
            h = np.sqrt(2.0 * 600.0 / c2)
        wlo = rs - h
        whi = rs + h
        if wlo < bnd[nb - 1]:
            wlo = bnd[nb - 1]
        if whi > rhi:
            whi = rhi
        if wlo > bnd[nb - 1]:
            bnd[nb] = wlo
            nb += 1
        if whi > bnd[nb - 1]:
            bnd[nb] = whi
            nb += 1
    if rhi > bnd[nb - 1]:
        bnd[nb] = rhi
        nb += 1
    nseg = nb - 1
    ftype = _FT_COS if trig == 0 else _FT_SIN
    total = 0.0
    err = 0.0
    tol_seg = tol_abs / nseg
    for s in range(nseg):
        A = bnd[s]
        B = bnd[s + 1]
        if B <= A:
            continue
        dphase = abs(_c_val(p, a, B) - _c_val(p, a, A))
        if dphase < _OSC_PHASE_ADAPTIVE:
            v, e = _adaptive(p, a, np.log(A), np.log(B), tol_seg, max_intervals, ftype)
            total += v
            err += e
            continue
        # integration by parts pays off only where the phase is fast; peel a
        # slow left part [A, M] for adaptive quadrature, advancing M until the
        # IBP remainder on [M, B] is acceptable (or the adaptive part would be
        # too oscillatory to afford, in which case the error stays honest)
        cA = _c_val(p, a, A)
        M = A
        e_ibp = _seg_tv_g3(p, a, M, B)
        while e_ibp > 0.25 * tol_seg:
            M2 = 2.0 * M
            if M2 >= B or abs(_c_val(p, a, M2) - cA) > 1e5:
                break
            M = M2
            e_ibp = _seg_tv_g3(p, a, M, B)
        if M > A:
            v, e = _adaptive(p, a, np.log(A), np.log(M), tol_seg, max_intervals, ftype)
            total += v
            err += e
        total += _osc_antideriv(p, a, B, trig) - _osc_antideriv(p, a, M, trig)
        err += e_ibp
    return total, err


@_jit
def _choose_r0(p, a, rm):
    """Start of the integration-by-parts tail: phase monotone and oscillating."""
    n = p.shape[0]
    jmax = 0
    for j in range(1, n):
        if a[j] > a[jmax]:
            jmax = j
    pj = abs(p[jmax])
    aj = a[jmax]
    r_mono = 1.0
    for j in range(n):
        # only opposite-sign terms can create critical points of the phase;
        # same-sign terms add constructively and never threaten monotonicity
        if j == jmax or p[j] * p[jmax] > 0.0:
            continue
        ratio = 2.0 * max(1, n - 1) * abs(p[j]) * a[j] / (pj * aj)
        if ratio > 0.0:
            cand = ratio ** (1.0 / (aj - a[j]))
            if cand > r_mono:
                r_mono = cand
    r_osc = (8.0 * np.pi / pj) ** (1.0 / aj)
    r0 = 2.0
    if 4.0 * rm > r0:
        r0 = 4.0 * rm
    if 2.0 * r_mono > r0:
        r0 = 2.0 * r_mono
    if r_osc > r0:
        r0 = r_osc
    if r0 > 1e12:
        r0 = 1e12
    return r0


@_jit
def radial_cos_integral(p, a, tol_abs, max_intervals):
    """integral over (0, inf) of (1 - cos(c(r))) / r^2 dr.

    `p`, `a`: cleaned phase coefficients (distinct exponents a_j > 1/2,
    nonzero p_j).  Returns (value, error_estimate).
    """
    n = p.shape[0]
    if n == 0:
        return 0.0, 0.0
    # cos is even in the phase: normalize the dominant coefficient positive
    jmax = 0
    ssum = 0.0
    amin = a[0]
    for j in range(n):
        ssum += abs(p[j])
        if a[j] > a[jmax]:
            jmax = j
        if a[j] < amin:
            amin = a[j]
    pw = p.copy()
    if p[jmax] < 0.0:
        for j in range(n):
            pw[j] = -p[j]
    # analytic head on (0, rm]: second-order Taylor of 1 - cos
    q4 = 4.0 * amin - 1.0
    rm = (0.1 * tol_abs * 24.0 * q4 / ssum**4) ** (1.0 / q4)
    if rm > 0.25:
        rm = 0.25
    head = 0.0
    for j in range(n):
        for k in range(n):
            e = a[j] + a[k] - 1.0
            head += 0.5 * pw[j] * pw[k] * rm**e / e
    err_head = ssum**4 * rm**q4 / (24.0 * q4)
    # oscillatory tail on [R, inf) by repeated integration by parts
    r0 = _choose_r0(pw, a, rm)
    R = r0
    tail = 0.0
    err_tail = 0.0
    for _ in range(45):
        g1, g2, g3 = _tail_coeffs(pw, a, R)
        cR = _c_val(pw, a, R)
        tail = 1.0 / R + (g1 - g3) * np.sin(cR) + g2 * np.cos(cR)
        err_tail = _tail_tv_g3(pw, a, R)
        if err_tail <= 0.3 * tol_abs or R > 1e13:
            break
        R *= 2.0
    # compensated low region [rm, Rm] (cancellation-free near small phases)
    Rm = 2.0
    if 4.0 * rm > Rm:
        Rm = 4.0 * rm
    if Rm > R:
        Rm = R
    mid, err_mid = _adaptive(pw, a, np.log(rm), np.log(Rm), 0.3 * tol_abs, max_intervals, 0)
    # oscillatory region [Rm, R]: split 1/r^2 exactly, resum the cosine part
    osc = 0.0
    err_osc = 0.0
    if R > Rm:
        oc, err_osc = _osc_int(pw, a, Rm, R, 0, 0.3 * tol_abs, max_intervals)
        osc = (1.0 / Rm - 1.0 / R) - oc
    return head + mid + osc + tail, err_head + err_mid + err_osc + err_tail


@_jit
def radial_imag_integral(p, a, tol_abs, max_intervals):
    """Imaginary part: integral over (0, inf) of
    (c(r) 1_{r<1} - sin(c(r))) / r^2 dr; returns (value, error_estimate)."""
    n = p.shape[0]
    if n == 0:
        return 0.0, 0.0
    jmax = 0
    ssum = 0.0
    amin = a[0]
    for j in range(n):
        ssum += abs(p[j])
        if a[j] > a[jmax]:
            jmax = j
        if a[j] < amin:
            amin = a[j]
    # the integrand is odd in the phase
    flip = 1.0
    pw = p.copy()
    if p[jmax] < 0.0:
        flip = -1.0
        for j in range(n):
            pw[j] = -p[j]
    # head: third-order Taylor of c - sin c on (0, rm]
    q5 = 5.0 * amin - 1.0
    rm = (0.1 * tol_abs * 120.0 * q5 / ssum**5) ** (1.0 / q5)
    if rm > 0.25:
        rm = 0.25
    head = 0.0
    for j in range(n):
        for k in range(n):
            for l in range(n):
                e = a[j] + a[k] + a[l] - 1.0
                head += pw[j] * pw[k] * pw[l] * rm**e / (6.0 * e)
    err_head = ssum**5 * rm**q5 / (120.0 * q5)
    # tail of -sin c / r^2
    r0 = _choose_r0(pw, a, rm)
    R = r0
    tail = 0.0
    err_tail = 0.0
    for _ in range(45):
        g1, g2, g3 = _tail_coeffs(pw, a, R)
        cR = _c_val(pw, a, R)
        tail = -((g1 - g3) * np.cos(cR) - g2 * np.sin(cR))
        err_tail = _tail_tv_g3(pw, a, R)
        if err_tail <= 0.3 * tol_abs or R > 1e13:
            break
        R *= 2.0
    Rm = 2.0
    if 4.0 * rm > Rm:
        Rm = 4.0 * rm
    if Rm > R:
        Rm = R
    mid1, e1 = _adaptive(pw, a, np.log(rm), 0.0, 0.2 * tol_abs, max_intervals, 1)
    mid2, e2 = _adaptive(pw, a, 0.0, np.log(Rm), 0.2 * tol_abs, max_intervals, 2)
    osc = 0.0
    e3 = 0.0
    if R > Rm:
        osc, e3 = _osc_int(pw, a, Rm, R, 1, 0.2 * tol_abs, max_intervals)
        osc = -osc
    return flip * (head + mid1 + mid2 + osc + tail), err_head + e1 + e2 + e3 + err_tail


# ---------------------------------------------------------------------------
# jump-SDE summary simulation
# ---------------------------------------------------------------------------

FIELD_CONSTANT = 0
FIELD_STABLE_LIKE_SIN = 1
FIELD_INTERPOLATED = 2


@_jit
def _eigh2x2(e11, e12, e22, evals, evecs):
    """Analytic eigendecomposition of a symmetric 2x2 matrix."""
    if e12 == 0.0:
        evals[0] = e11
        evals[1] = e22
        evecs[0, 0] = 1.0
        evecs[1, 0] = 0.0
        evecs[0, 1] = 0.0
        evecs[1, 1] = 1.0
        return
    tr = e11 + e22
    disc = np.sqrt(0.25 * (e11 - e22) ** 2 + e12 * e12)
    evals[0] = 0.5 * tr - disc
    evals[1] = 0.5 * tr + disc
    # eigenvector for evals[0]
    v0 = e12
    v1 = evals[0] - e11
    nrm = np.sqrt(v0 * v0 + v1 * v1)
    v0 /= nrm
    v1 /= nrm
    evecs[0, 0] = v0
    evecs[1, 0] = v1
    evecs[0, 1] = -v1
    evecs[1, 1] = v0


@_jit
def _field_eigh(fkind, fA, fB, fvec, fsc, x, evals, evecs):
    """Eigendata of E(x) for the shipped field kinds.

    Returns a scalar exponent for FIELD_STABLE_LIKE_SIN (diagonal shortcut,
    evals/evecs untouched); returns nan otherwise after filling evals/evecs.
    """
    d = x.shape[0]
    if fkind == FIELD_STABLE_LIKE_SIN:
        alpha = fsc[0] + fsc[1] * np.sin(x[0])
        return 1.0 / alpha
    if fkind == FIELD_CONSTANT:
        for i in range(d):
            evals[i] = fvec[i]
            for j in range(d):
                evecs[i, j] = fA[i, j]
        return np.nan
    # interpolated: E = (1-s) E_low + s E_high, s = clip(<w, x> + c0, 0, 1)
    s = fvec[d]
    for i in range(d):
        s += fvec[i] * x[i]
    if s < 0.0:
        s = 0.0
    elif s > 1.0:
        s = 1.0
    if d == 2:
        e11 = (1.0 - s) * fA[0, 0] + s * fB[0, 0]
        e12 = (1.0 - s) * fA[0, 1] + s * fB[0, 1]
        e22 = (1.0 - s) * fA[1, 1] + s * fB[1, 1]
        _eigh2x2(e11, e12, e22, evals, evecs)
    else:
        E = (1.0 - s) * fA + s * fB
        w, v = np.linalg.eigh(E)
        for i in range(d):
            evals[i] = w[i]
            for j in range(d):
                evecs[i, j] = v[i, j]
    return np.nan


@_jit
def _apply_power(evals, evecs, scalar_exp, r, vec_in, vec_out, work):
    """vec_out = r^E vec_in given eigendata (or scalar exponent)."""
    d = vec_in.shape[0]
    if not np.isnan(scalar_exp):
        f = r**scalar_exp
        for i in range(d):
            vec_out[i] = f * vec_in[i]
        return
    for j in range(d):
        s = 0.0
        for i in range(d):
            s += evecs[i, j] * vec_in[i]
        work[j] = s * r ** evals[j]
    for i in range(d):
        s = 0.0
        for j in range(d):
            s += evecs[i, j] * work[j]
        vec_out[i] = s


@_jit
def _drift_vector(evals, evecs, scalar_exp, eps, svec, out, work):
    """out = -M(x) svec with M = integral over (eps,1) of r^E r^-2 dr."""
    d = svec.shape[0]
    if not np.isnan(scalar_exp):
        e = scalar_exp
        if abs(e - 1.0) < 1e-12:
            f = -np.log(eps)
        else:
            f = (1.0 - eps ** (e - 1.0)) / (e - 1.0)
        for i in range(d):
            out[i] = -f * svec[i]
        return
    for j in range(d):
        s = 0.0
        for i in range(d):
            s += evecs[i, j] * svec[i]
        e = evals[j]
        if abs(e - 1.0) < 1e-12:
            f = -np.log(eps)
        else:
            f = (1.0 - eps ** (e - 1.0)) / (e - 1.0)
        work[j] = s * f
    for i in range(d):
        s = 0.0
        for j in range(d):
            s += evecs[i, j] * work[j]
        out[i] = -s


@_jit
def _draw_direction(state, atoms, cumw, uniform_dim, out):
    """Next jump direction; returns the advanced stream state."""
    d = out.shape[0]
    if uniform_dim == 0:
        state, u = stream_next(state)
        k = atoms.shape[0]
        idx = k - 1
        target = u * cumw[k - 1]
        for i in range(k):
            if target < cumw[i]:
                idx = i
                break
        for i in range(d):
            out[i] = atoms[idx, i]
        return state
    # isotropic gaussian via Box-Muller, normalized
    nrm = 0.0
    i = 0
    while i < d:
        state, u1 = stream_next(state)
        state, u2 = stream_next(state)
        rho = np.sqrt(-2.0 * np.log(1.0 - u1))
        z1 = rho * np.cos(2.0 * np.pi * u2)
        z2 = rho * np.sin(2.0 * np.pi * u2)
        out[i] = z1
        if i + 1 < d:
            out[i + 1] = z2
        i += 2
    for i in range(d):
        nrm += out[i] * out[i]
    nrm = np.sqrt(nrm)
    if nrm == 0.0:
        out[0] = 1.0
        for i in range(1, d):
            out[i] = 0.0
        return state
    for i in range(d):
        out[i] /= nrm
    return state


@_jit
def simulate_summaries_kernel(
    fkind,
    fA,
    fB,
    fvec,
    fsc,
    atoms,
    cumw,
    uniform_dim,
    x0,
    T,
    eps,
    rate,
    seed,
    n_paths,
    t_checks,
    R_levels,
    p_exps,
    p_thresholds,
    drift_on,
    drift_svec,
    early_stop,
):
    """Event-driven paths; per-path online summaries, nothing stored.

    Outputs: states at t_checks (n, K, d), running sup-displacement at
    t_checks (n, K), first exit times per R level (n, L; inf = censored),
    jump-size power sums per (p, threshold) (n, P, Q), event counts (n,).
    """
    d = x0.shape[0]
    K = t_checks.shape[0]
    L = R_levels.shape[0]
    P = p_exps.shape[0]
    Q = p_thresholds.shape[0]
    states = np.empty((n_paths, K, d))
    maxdisp = np.zeros((n_paths, K))
    exits = np.full((n_paths, L), np.inf)
    psums = np.zeros((n_paths, P, Q))
    nev = np.zeros(n_paths, dtype=np.int64)

    x = np.empty(d)
    theta = np.empty(d)
    dx = np.empty(d)
    work = np.empty(d)
    evals = np.empty(d)
    evecs = np.empty((d, d))
    drift = np.zeros(d)

    for ip in range(n_paths):
        st = stream_init(seed, ip)
        for i in range(d):
            x[i] = x0[i]
        t = 0.0
        cur_max = 0.0
        kc = 0
        nl = 0  # next unexited R level (levels ascending)
        count = 0
        while True:
            st, u = stream_next(st)
            gap = -np.log(1.0 - u) / rate
            t_ev = t + gap
            sexp = np.nan
            if drift_on:
                sexp = _field_eigh(fkind, fA, fB, fvec, fsc, x, evals, evecs)
                _drift_vector(evals, evecs, sexp, eps, drift_svec, drift, work)
            seg_end = t_ev if t_ev < T else T
            # record checkpoints falling inside (t, seg_end]
            while kc < K and t_checks[kc] <= seg_end:
                for i in range(d):
                    si = x[i]
                    if drift_on:
                        si += drift[i] * (t_checks[kc] - t)
                    states[ip, kc, i] = si
                maxdisp[ip, kc] = cur_max
                kc += 1
            if t_ev >= T:
                break
            if drift_on:
                for i in range(d):
                    x[i] += drift[i] * gap
            else:
                sexp = _field_eigh(fkind, fA, fB, fvec, fsc, x, evals, evecs)
            st = _draw_direction(st, atoms, cumw, uniform_dim, theta)
            st, u = stream_next(st)
            if u < 1e-300:
                u = 1e-300
            r = eps / u
            if drift_on:
                sexp = _field_eigh(fkind, fA, fB, fvec, fsc, x, evals, evecs)
            _apply_power(evals, evecs, sexp, r, theta, dx, work)
            jump_norm = 0.0
            for i in range(d):
                x[i] += dx[i]
                jump_norm += dx[i] * dx[i]
            jump_norm = np.sqrt(jump_norm)
            count += 1
            disp = 0.0
            for i in range(d):
                disp += (x[i] - x0[i]) ** 2
            disp = np.sqrt(disp)
            if disp > cur_max:
                cur_max = disp
            while nl < L and disp > R_levels[nl]:
                exits[ip, nl] = t_ev
                nl += 1
            for jp in range(P):
                for jq in range(Q):
                    if r > p_thresholds[jq]:
                        psums[ip, jp, jq] += jump_norm ** p_exps[jp]
            t = t_ev
            if early_stop and nl >= L:
                # caller only wants exit times; fill remaining checkpoints
                while kc < K:
                    for i in range(d):
                        states[ip, kc, i] = x[i]
                    maxdisp[ip, kc] = cur_max
                    kc += 1
                break
        nev[ip] = count
    return states, maxdisp, exits, psums, nev
