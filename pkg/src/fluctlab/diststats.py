"""Reference distribution functions and the empirical-statistics toolkit.

Tracy-Widom distribution functions are computed two independent ways:

* Fredholm determinants, Nystrom-discretized with Gauss-Legendre nodes
  under a tan change of variables -- the Airy kernel on (s, oo) for the
  GUE law, and the kernel Ai(x + y + s) on (0, oo) for the GOE law.
* Hastings-McLeod integration of Painleve II, kept as the independent
  oracle (q'' = x q + 2 q^3 with q ~ Ai at +oo).

Tables are cached to disk because the determinant sweep is the hot spot
of any acceptance run.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import PchipInterpolator
from scipy.special import airy, ndtr

from .params import LimitLaw, ParamError

_TABLE_VERSION_ORDER_DEFAULT = 64

TW_RANGES = {"GUE": (-10.0, 6.0), "GOE": (-10.0, 10.0)}
_TABLE_STEP = 0.05


def gaussian_cdf(x):
    """Standard normal distribution function."""
    return ndtr(x)


def g2_product_cdf(x, c: float):
    """G1(c x) * G1(x / c); the coincident-leading-order limit law."""
    if c <= 0.0:
        raise ParamError(f"product factor must be positive, got {c}")
    return ndtr(np.asarray(x, dtype=float) * c) * ndtr(np.asarray(x, dtype=float) / c)


# --------------------------------------------------------------------------
# Fredholm determinants
# --------------------------------------------------------------------------

def _nystrom_nodes(order: int):
    xi, wi = leggauss(order)
    phi = 10.0 * np.tan(0.25 * np.pi * (xi + 1.0))
    dphi = 10.0 * 0.25 * np.pi / np.cos(0.25 * np.pi * (xi + 1.0)) ** 2
    return phi, wi * dphi


def fredholm_det_gue(s: float, order: int = _TABLE_VERSION_ORDER_DEFAULT) -> float:
    """det(I - K_Airy) on L^2(s, oo)."""
    x, w = _nystrom_nodes(order)
    x = x + s
    with np.errstate(under="ignore"):
        ai, aip, _, _ = airy(x)
    sq = np.sqrt(w)
    diff = x[:, None] - x[None, :]
    num = ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = num / diff
    d = aip * aip - x * ai * ai
    np.fill_diagonal(k, d)
    a = k * sq[:, None] * sq[None, :]
    return float(np.linalg.det(np.eye(order) - a))


def fredholm_det_goe(s: float, order: int = _TABLE_VERSION_ORDER_DEFAULT) -> float:
    """det(I - B_s) on L^2(0, oo) with B_s(x, y) = Ai(x + y + s)."""
    x, w = _nystrom_nodes(order)
    sq = np.sqrt(w)
    with np.errstate(under="ignore"):
        ai = airy(x[:, None] + x[None, :] + s)[0]
    a = ai * sq[:, None] * sq[None, :]
    return float(np.linalg.det(np.eye(order) - a))


# --------------------------------------------------------------------------
# Painleve II oracle
# --------------------------------------------------------------------------

def painleve_tw_cdf(xs, x_start: float = 8.0):
    """(F_GUE, F_GOE) on the requested grid by integrating the
    Hastings-McLeod solution downward from x_start.

    State: [q, q', Q, I2, J] with Q = int q, I2 = int q^2,
    J = int (t - x) q(t)^2 dt, all over (x, oo);
    F_GUE = exp(-J), F_GOE = exp(-(Q + J)/2).
    """
    xs = np.asarray(xs, dtype=float)
    if xs.max() > x_start:
        raise ParamError("grid exceeds the asymptotic start point")
    ai0, aip0, _, _ = airy(x_start)
    q_int = quad(lambda u: airy(u)[0], x_start, np.inf, limit=200)[0]
    i2 = quad(lambda u: airy(u)[0] ** 2, x_start, np.inf, limit=200)[0]
    jj = quad(lambda u: (u - x_start) * airy(u)[0] ** 2, x_start, np.inf, limit=200)[0]

    def rhs(x, y):
        q, qp, _, _, _ = y
        return [qp, x * q + 2.0 * q ** 3, -q, -q * q, -y[3]]

    order = np.argsort(xs)[::-1]
    sol = solve_ivp(rhs, (x_start, float(xs.min())),
                    [ai0, aip0, q_int, i2, jj],
                    t_eval=xs[order], method="DOP853",
                    rtol=1e-11, atol=1e-13)
    if not sol.success:
        raise RuntimeError(f"Painleve integration failed: {sol.message}")
    f2 = np.empty_like(xs)
    f1 = np.empty_like(xs)
    f2[order] = np.exp(-sol.y[4])
    f1[order] = np.exp(-0.5 * (sol.y[2] + sol.y[4]))
    return f2, f1


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

@dataclass
class CdfTable:
    """Monotone cubic (PCHIP) table of a distribution function."""

    family: str
    order: int
    xs: np.ndarray
    fs: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.fs) < -1e-12):
            raise ParamError("table values must be nondecreasing")
        self.fs = np.minimum(np.maximum(self.fs, 0.0), 1.0)
        self._interp = PchipInterpolator(self.xs, self.fs, extrapolate=False)

    @property
    def x_min(self) -> float:
        return float(self.xs[0])

    @property
    def x_max(self) -> float:
        return float(self.xs[-1])

    def evaluate(self, x):
        """(values, clamped) where clamped marks out-of-range arguments
        pinned to the nearest tail value."""
        x = np.asarray(x, dtype=float)
        lo = x < self.x_min
        hi = x > self.x_max
        vals = self._interp(np.clip(x, self.x_min, self.x_max))
        vals = np.where(lo, self.fs[0], vals)
        vals = np.where(hi, self.fs[-1], vals)
        return np.clip(vals, 0.0, 1.0), lo | hi

    def cdf(self, x):
        return self.evaluate(x)[0]

    def __call__(self, x):
        return self.evaluate(x)[0]

    def inverse_sample(self, u):
        """Inverse-CDF transform of uniforms (for drawing test samples)."""
        u = np.asarray(u, dtype=float)
        mask = (self.fs > 1e-14) & (self.fs < 1.0 - 1e-14)
        idx = np.flatnonzero(mask)
        lo = max(idx[0] - 1, 0)
        hi = min(idx[-1] + 2, len(self.xs))
        fs, xs = self.fs[lo:hi], self.xs[lo:hi]
        keep = np.concatenate(([True], np.diff(fs) > 0))
        return np.interp(u, fs[keep], xs[keep])

    def save(self, path) -> None:
        buf = io.StringIO()
        buf.write(f"# {self.family} {self.order} {self.xs[0]:.17g} "
                  f"{self.xs[-1]:.17g} {len(self.xs)}\n")
        for x, f in zip(self.xs, self.fs):
            buf.write(f"{x:.17g}\t{f:.17g}\n")
        Path(path).write_text(buf.getvalue())

    @classmethod
    def load(cls, path) -> "CdfTable":
        lines = Path(path).read_text().strip().splitlines()
        head = lines[0].lstrip("# ").split()
        family, order, n = head[0], int(head[1]), int(head[4])
        rows = [ln.split("\t") for ln in lines[1:]]
        if len(rows) != n:
            raise ParamError(f"table {path} truncated: {len(rows)} != {n}")
        xs = np.array([float(r[0]) for r in rows])
        fs = np.array([float(r[1]) for r in rows])
        return cls(family=family, order=order, xs=xs, fs=fs)


def build_tw_table(family: str, order: int = _TABLE_VERSION_ORDER_DEFAULT,
                   x_min: float | None = None, x_max: float | None = None,
                   step: float = _TABLE_STEP) -> CdfTable:
    if family not in TW_RANGES:
        raise ParamError(f"family must be GUE or GOE, got {family!r}")
    lo, hi = TW_RANGES[family]
    x_min = lo if x_min is None else x_min
    x_max = hi if x_max is None else x_max
    n = int(round((x_max - x_min) / step)) + 1
    xs = x_min + step * np.arange(n)
    det = fredholm_det_gue if family == "GUE" else fredholm_det_goe
    fs = np.array([det(float(s), order) for s in xs])
    return CdfTable(family=family, order=order, xs=xs, fs=fs)


def cache_dir() -> Path:
    root = os.environ.get("FLUCTLAB_CACHE")
    if root:
        return Path(root)
    return Path.home() / ".cache" / "fluctlab"


_MEM_TABLES: dict[tuple[str, int], CdfTable] = {}


def get_tw_table(family: str, order: int = _TABLE_VERSION_ORDER_DEFAULT) -> CdfTable:
    key = (family, order)
    if key in _MEM_TABLES:
        return _MEM_TABLES[key]
    path = cache_dir() / f"tw_{family.lower()}_{order}.tsv"
    if path.exists():
        tab = CdfTable.load(path)
        if tab.family == family and tab.order == order:
            _MEM_TABLES[key] = tab
            return tab
    tab = build_tw_table(family, order)
    path.parent.mkdir(parents=True, exist_ok=True)
    tab.save(path)
    _MEM_TABLES[key] = tab
    return tab


def tw_cdf(beta: str, x, order: int = _TABLE_VERSION_ORDER_DEFAULT):
    """Tracy-Widom distribution function for beta in {'GUE', 'GOE'};
    out-of-range arguments are clamped to the tail values."""
    return get_tw_table(beta, order).cdf(x)


def reference_cdf(law: LimitLaw, order: int = _TABLE_VERSION_ORDER_DEFAULT):
    """Callable CDF for a limit-law tag.  F1 is the square of the GOE
    function; F11 has no analytic definition here and is rejected."""
    if law.tag == "G1":
        return gaussian_cdf
    if law.tag == "G1_PRODUCT":
        c = law.product_factor
        return lambda x: g2_product_cdf(x, c)
    if law.tag == "F0":
        return get_tw_table("GUE", order).cdf
    if law.tag == "F1":
        goe = get_tw_table("GOE", order)
        return lambda x: goe.cdf(x) ** 2
    raise ParamError(f"no reference CDF available for law {law.tag}")


def table_moments(table_or_cdf, x_min: float, x_max: float, n: int = 8001):
    """(mean, variance) of a distribution from its CDF by tail integration."""
    xs = np.linspace(x_min, x_max, n)
    f = np.asarray(table_or_cdf(xs) if callable(table_or_cdf) else table_or_cdf.cdf(xs))
    pos = xs >= 0.0
    neg = xs <= 0.0
    mean = np.trapezoid((1.0 - f)[pos], xs[pos]) - np.trapezoid(f[neg], xs[neg])
    ex2 = 2.0 * np.trapezoid((xs * (1.0 - f))[pos], xs[pos]) \
        - 2.0 * np.trapezoid((xs * f)[neg], xs[neg])
    return float(mean), float(ex2 - mean * mean)


# --------------------------------------------------------------------------
# empirical statistics
# --------------------------------------------------------------------------

@dataclass
class Ecdf:
    """Sorted sample values."""

    values: np.ndarray

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float))
        if v.size < 1:
            raise ParamError("ECDF needs at least one sample")
        self.values = v

    @property
    def count(self) -> int:
        return self.values.size

    def cdf(self, x):
        """Right-continuous empirical distribution function."""
        return np.searchsorted(self.values, np.asarray(x, dtype=float), side="right") / self.count

    def cdf_left(self, x):
        return np.searchsorted(self.values, np.asarray(x, dtype=float), side="left") / self.count


def ks_statistic(e: Ecdf, ref) -> float:
    """sup-norm distance between the ECDF and a reference distribution
    function.  ``ref`` may be a callable CDF, a CdfTable, or another Ecdf
    (treated as a step function, with left limits handled exactly)."""
    if isinstance(ref, Ecdf):
        # both are right-continuous steps; the sup is attained at a jump
        return ks_two_sample(e, ref)
    x = e.values
    n = e.count
    i = np.arange(1, n + 1)
    f = np.asarray(ref(x), dtype=float)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus, 0.0))


def ks_two_sample(a, b) -> float:
    ea = a if isinstance(a, Ecdf) else Ecdf(a)
    eb = b if isinstance(b, Ecdf) else Ecdf(b)
    grid = np.concatenate([ea.values, eb.values])
    return float(np.max(np.abs(ea.cdf(grid) - eb.cdf(grid))))


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    variance: float
    skewness: float
    se_mean: float
    se_variance: float
    se_skewness: float
    count: int


def _central_moments_loo(v: np.ndarray):
    """Leave-one-out (mean, m2, m3) for every left-out index, O(n)."""
    n = v.size
    s1, s2, s3 = v.sum(), (v ** 2).sum(), (v ** 3).sum()
    p1 = (s1 - v) / (n - 1)
    p2 = (s2 - v ** 2) / (n - 1)
    p3 = (s3 - v ** 3) / (n - 1)
    m2 = p2 - p1 ** 2
    m3 = p3 - 3.0 * p1 * p2 + 2.0 * p1 ** 3
    return p1, m2, m3


def summarize(e: Ecdf) -> SummaryStats:
    """Standard moment estimators with jackknife standard errors."""
    v = e.values
    n = v.size
    mean = float(v.mean())
    if n < 2:
        raise ParamError("variance needs at least two samples")
    var = float(v.var(ddof=1))
    m2 = v.var(ddof=0)
    m3 = float(((v - mean) ** 3).mean())
    skew = m3 / m2 ** 1.5 if m2 > 0 else 0.0

    p1, m2l, m3l = _central_moments_loo(v)
    var_l = m2l * (n - 1) / (n - 2) if n > 2 else m2l
    with np.errstate(divide="ignore", invalid="ignore"):
        skew_l = np.where(m2l > 0, m3l / np.maximum(m2l, 1e-300) ** 1.5, 0.0)

    def jack_se(loo):
        return float(np.sqrt((n - 1) / n * ((loo - loo.mean()) ** 2).sum()))

    return SummaryStats(
        mean=mean, variance=var, skewness=float(skew),
        se_mean=jack_se(p1), se_variance=jack_se(var_l), se_skewness=jack_se(skew_l),
        count=n,
    )
