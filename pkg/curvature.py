"""Levi-Civita connection and curvature of catalog metrics.

The primary path runs in coordinates (Christoffel symbols, Riemann, Ricci). Frame
connection and curvature forms are obtained by basis change and by the structure
equations, which gives a second path to check the first against.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np

from catalog import MetricInstance, group
from config import Config
from forms import (COORDINATE, Basis, KForm, Matrix, SymTensor2, change_basis,
                   determinant, frame_data, inverse, mat_mul, zeros)
from ring import COORDS, ZERO, EngineError, Scalar, UnboundSymbol


class SingularMetric(EngineError):
    def __init__(self, where: str):
        super().__init__(f"metric is singular {where}")
        self.where = where


@dataclass
class Christoffel:
    gamma: List[List[List[Scalar]]]  # gamma[k][i][j] = Γ^k_ij
    basis: Basis = COORDINATE

    def symbol(self, k: int, i: int, j: int) -> Scalar:
        return self.gamma[k][i][j]


@dataclass
class ConnectionFormMatrix:
    omega: List[List[KForm]]  # omega[i][j] = ω^i_j, frame 1-forms
    group: str

    def entry(self, i: int, j: int) -> KForm:
        return self.omega[i][j]

    @property
    def basis(self) -> Basis:
        return Basis.frame(self.group)


@dataclass
class CurvatureFormMatrix:
    Omega: List[List[KForm]]  # Omega[i][j] = Ω^i_j, frame 2-forms
    group: str

    def entry(self, i: int, j: int) -> KForm:
        return self.Omega[i][j]

    def is_zero(self) -> bool:
        return all(form.is_zero() for row in self.Omega for form in row)


@dataclass
class RicciData:
    ricci: SymTensor2  # frame components
    scalar: Scalar
    operator: Matrix  # G^-1 Ric in the frame

    @property
    def coordinate(self) -> SymTensor2:
        return change_basis(self.ricci, COORDINATE)


def _check_det(det: Scalar, where: str):
    if not det:
        raise SingularMetric(where)


@lru_cache(maxsize=None)
def frame_inverse_metric(g: MetricInstance) -> Matrix:
    frame_g = g.frame_g.components
    _check_det(determinant(frame_g), f"for {g.family}")
    return inverse(frame_g)


@lru_cache(maxsize=None)
def inverse_metric(g: MetricInstance) -> Matrix:
    """Coordinate inverse g^ab = (E^T G^-1 E)_ab; exact"""
    e = frame_data(g.group).frame
    e_t = [list(row) for row in zip(*e)]
    return mat_mul(mat_mul(e_t, frame_inverse_metric(g)), e)


def _metric_derivatives(components: Matrix) -> List[Matrix]:
    """dg[c][a][b] = ∂_c g_ab"""
    return [[[components[a][b].partial(c) if components[a][b] else ZERO for b in range(4)]
             for a in range(4)] for c in COORDS]


@lru_cache(maxsize=None)
def christoffel(g: MetricInstance) -> Christoffel:
    gc = g.g.components
    ginv = inverse_metric(g)
    dg = _metric_derivatives(gc)
    lowered = [[[ZERO] * 4 for _ in range(4)] for _ in range(4)]
    for l in range(4):
        for i in range(4):
            for j in range(i, 4):
                value = dg[i][j][l] + dg[j][i][l] - dg[l][i][j]
                lowered[l][i][j] = lowered[l][j][i] = value / 2
    gamma = [[[ZERO] * 4 for _ in range(4)] for _ in range(4)]
    for k in range(4):
        for i in range(4):
            for j in range(i, 4):
                total = ZERO
                for l in range(4):
                    if ginv[k][l] and lowered[l][i][j]:
                        total = total + ginv[k][l] * lowered[l][i][j]
                gamma[k][i][j] = gamma[k][j][i] = total
    return Christoffel(gamma)


@lru_cache(maxsize=None)
def riemann(g: MetricInstance) -> List[List[List[List[Scalar]]]]:
    """R[l][i][j][k] = R^l_ijk, the components of R(∂_i, ∂_j)∂_k"""
    gamma = christoffel(g).gamma
    out = [[[[ZERO] * 4 for _ in range(4)] for _ in range(4)] for _ in range(4)]
    for l in range(4):
        for i in range(4):
            for j in range(i + 1, 4):
                for k in range(4):
                    value = gamma[l][j][k].partial(COORDS[i]) - gamma[l][i][k].partial(COORDS[j])
                    for m in range(4):
                        if gamma[l][i][m] and gamma[m][j][k]:
                            value = value + gamma[l][i][m] * gamma[m][j][k]
                        if gamma[l][j][m] and gamma[m][i][k]:
                            value = value - gamma[l][j][m] * gamma[m][i][k]
                    out[l][i][j][k] = value
                    out[l][j][i][k] = -value
    return out


@lru_cache(maxsize=None)
def lowered_riemann(g: MetricInstance) -> List[List[List[List[Scalar]]]]:
    """R[m][i][j][k] = g(R(∂_i, ∂_j)∂_k, ∂_m)"""
    r = riemann(g)
    gc = g.g.components
    out = [[[[ZERO] * 4 for _ in range(4)] for _ in range(4)] for _ in range(4)]
    for m in range(4):
        for i in range(4):
            for j in range(i + 1, 4):
                for k in range(4):
                    total = ZERO
                    for l in range(4):
                        if gc[m][l] and r[l][i][j][k]:
                            total = total + gc[m][l] * r[l][i][j][k]
                    out[m][i][j][k] = total
                    out[m][j][i][k] = -total
    return out


def riemann_symmetries(g: MetricInstance) -> Dict[str, bool]:
    """Exact check of the algebraic symmetries of the lowered Riemann tensor"""
    R = lowered_riemann(g)
    quads = [(m, i, j, k) for m in range(4) for i in range(4) for j in range(4) for k in range(4)]
    return {
        "antisymmetric_first_pair": all(R[m][i][j][k] == -R[m][j][i][k] for m, i, j, k in quads),
        "antisymmetric_second_pair": all(R[m][i][j][k] == -R[k][i][j][m] for m, i, j, k in quads),
        "pair_exchange": all(R[m][i][j][k] == R[j][k][m][i] for m, i, j, k in quads),
        "first_bianchi": all(not (R[m][i][j][k] + R[m][j][k][i] + R[m][k][i][j]) for m, i, j, k in quads),
    }


@lru_cache(maxsize=None)
def coordinate_ricci(g: MetricInstance) -> SymTensor2:
    r = riemann(g)
    m = zeros()
    for j in range(4):
        for k in range(4):
            total = ZERO
            for i in range(4):
                if r[i][i][j][k]:
                    total = total + r[i][i][j][k]
            m[j][k] = total
    return SymTensor2(m, COORDINATE)


@lru_cache(maxsize=None)
def ricci(g: MetricInstance) -> RicciData:
    frame = change_basis(coordinate_ricci(g), g.frame_g.basis)
    operator = mat_mul(frame_inverse_metric(g), frame.components)
    scalar = ZERO
    for i in range(4):
        scalar = scalar + operator[i][i]
    return RicciData(frame, scalar, operator)


def frame_christoffel(g: MetricInstance) -> List[List[List[Scalar]]]:
    """tilde[i][k][j] with ∇_{X_k} X_j = Σ_i tilde[i][k][j] X_i, from the coordinate symbols"""
    data = frame_data(g.group)
    e, theta = data.frame, data.coframe
    gamma = christoffel(g).gamma
    out = [[[ZERO] * 4 for _ in range(4)] for _ in range(4)]
    for k in range(4):
        for j in range(4):
            # coordinate components of ∇_{X_k} X_j
            nabla = []
            for a in range(4):
                value = ZERO
                for b, coordinate in enumerate(COORDS):
                    if e[k][b] and e[j][a]:
                        derivative = e[j][a].partial(coordinate)
                        if derivative:
                            value = value + e[k][b] * derivative
                    for c in range(4):
                        if e[k][b] and e[j][c] and gamma[a][b][c]:
                            value = value + e[k][b] * e[j][c] * gamma[a][b][c]
                nabla.append(value)
            for i in range(4):
                out[i][k][j] = sum((theta[i][a] * nabla[a] for a in range(4) if theta[i][a] and nabla[a]), ZERO)
    return out


def koszul_frame_christoffel(g: MetricInstance) -> List[List[List[Scalar]]]:
    """Same symbols from the structure constants and the constant frame matrix G:
    2 G(∇_k X_j, X_m) = G([X_k,X_j],X_m) - G([X_j,X_m],X_k) + G([X_m,X_k],X_j)"""
    spec = group(g.group)
    G = g.frame_g.components
    ginv = frame_inverse_metric(g)

    def bracket_pair(a: int, b: int, c: int) -> Scalar:
        total = ZERO
        for n in range(4):
            constant = spec.bracket_constant(a, b, n)
            if constant and G[n][c]:
                total = total + G[n][c] * constant
        return total

    out = [[[ZERO] * 4 for _ in range(4)] for _ in range(4)]
    for k in range(4):
        for j in range(4):
            lowered = [(bracket_pair(k, j, m) - bracket_pair(j, m, k) + bracket_pair(m, k, j)) / 2
                       for m in range(4)]
            for i in range(4):
                out[i][k][j] = sum((ginv[i][m] * lowered[m] for m in range(4) if ginv[i][m] and lowered[m]), ZERO)
    return out


@lru_cache(maxsize=None)
def frame_connection_matrix(g: MetricInstance) -> ConnectionFormMatrix:
    """ω^i_j = Σ_k tilde^i_kj ω^k"""
    basis = g.frame_g.basis
    tilde = frame_christoffel(g)
    omega = [[KForm.one_form([tilde[i][k][j] for k in range(4)], basis) for j in range(4)]
             for i in range(4)]
    return ConnectionFormMatrix(omega, g.group)


def coframe_forms(group_id: str) -> List[KForm]:
    basis = Basis.frame(group_id)
    return [KForm.basic([i], basis) for i in range(4)]


def torsion(c: ConnectionFormMatrix) -> List[KForm]:
    """dω^i + Σ_j ω^i_j ∧ ω^j; zero for a torsion-free connection"""
    coframe = coframe_forms(c.group)
    out = []
    for i in range(4):
        total = coframe[i].exterior_derivative()
        for j in range(4):
            total = total + c.omega[i][j].wedge(coframe[j])
        out.append(total)
    return out


def frame_compatibility(g: MetricInstance, c: ConnectionFormMatrix) -> List[List[KForm]]:
    """(ω^T G + G ω)_ij, zero for a metric connection with constant G"""
    G = g.frame_g.components
    basis = g.frame_g.basis
    out = []
    for i in range(4):
        row = []
        for j in range(4):
            total = KForm(1, {}, basis)
            for m in range(4):
                if G[m][j]:
                    total = total + c.omega[m][i].scale(G[m][j])
                if G[i][m]:
                    total = total + c.omega[m][j].scale(G[i][m])
            row.append(total)
        out.append(row)
    return out


def metric_compatibility(g: MetricInstance) -> List[List[List[Scalar]]]:
    """∂_k g_ij - Γ^l_ki g_lj - Γ^l_kj g_il, zero for the Levi-Civita connection"""
    gc = g.g.components
    gamma = christoffel(g).gamma
    out = [[[ZERO] * 4 for _ in range(4)] for _ in range(4)]
    for k, coordinate in enumerate(COORDS):
        for i in range(4):
            for j in range(4):
                value = gc[i][j].partial(coordinate) if gc[i][j] else ZERO
                for l in range(4):
                    if gamma[l][k][i] and gc[l][j]:
                        value = value - gamma[l][k][i] * gc[l][j]
                    if gamma[l][k][j] and gc[i][l]:
                        value = value - gamma[l][k][j] * gc[i][l]
                out[k][i][j] = value
    return out


def frame_curvature_matrix(c: ConnectionFormMatrix) -> CurvatureFormMatrix:
    """Ω = dω + ω ∧ ω"""
    basis = c.basis
    Omega = []
    for i in range(4):
        row = []
        for j in range(4):
            total = c.omega[i][j].exterior_derivative()
            for k in range(4):
                if c.omega[i][k].is_zero() or c.omega[k][j].is_zero():
                    continue
                total = total + c.omega[i][k].wedge(c.omega[k][j])
            row.append(KForm(2, total.components, basis))
        Omega.append(row)
    return CurvatureFormMatrix(Omega, c.group)


def curvature_from_riemann(g: MetricInstance) -> CurvatureFormMatrix:
    """Ω^i_j(X_k, X_l) = ω^i(R(X_k, X_l) X_j) read off the coordinate Riemann tensor"""
    data = frame_data(g.group)
    e, theta = data.frame, data.coframe
    r = riemann(g)
    basis = g.frame_g.basis
    Omega = []
    for i in range(4):
        row = []
        for j in range(4):
            components: Dict[tuple, Scalar] = {}
            for k in range(4):
                for l in range(k + 1, 4):
                    total = ZERO
                    for a in range(4):
                        if not theta[i][a]:
                            continue
                        for b in range(4):
                            if not e[k][b]:
                                continue
                            for c_ in range(4):
                                if not e[l][c_]:
                                    continue
                                for d in range(4):
                                    if e[j][d] and r[a][b][c_][d]:
                                        total = total + theta[i][a] * e[k][b] * e[l][c_] * e[j][d] * r[a][b][c_][d]
                    components[(k, l)] = total
            row.append(KForm(2, components, basis))
        Omega.append(row)
    return CurvatureFormMatrix(Omega, g.group)


def ricci_from_curvature(Omega: CurvatureFormMatrix) -> Matrix:
    """Ric(X_j, X_k) = Σ_i Ω^i_k(X_i, X_j)"""
    out = zeros()
    for j in range(4):
        for k in range(4):
            total = ZERO
            for i in range(4):
                if i == j:
                    continue
                key = (i, j) if i < j else (j, i)
                value = Omega.Omega[i][k].component(key)
                total = total + value if i < j else total - value
            out[j][k] = total
    return out


# -- numeric oracle ----------------------------------------------------------

def _float_binding(g: MetricInstance) -> Dict[str, float]:
    missing = set()
    for row in g.g.components:
        for value in row:
            missing |= {s for s in value.free_symbols() if s not in COORDS}
    if missing:
        raise UnboundSymbol(missing)
    return {name: float(value) for name, value in g.rational_binding().items()}


def numeric_curvature_oracle(g: MetricInstance, point: Sequence[float],
                             h: Optional[float] = None) -> np.ndarray:
    """Coordinate Ricci at a point by central differences of the metric components"""
    h = h or Config.FD_STEP
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    base = _float_binding(g)
    compiled = [[value.compile() for value in row] for row in g.g.components]

    def metric_at(p: np.ndarray) -> np.ndarray:
        values = dict(base)
        values.update(zip(COORDS, (float(v) for v in p)))
        return np.array([[f(values) for f in row] for row in compiled])

    def gamma_at(p: np.ndarray) -> np.ndarray:
        dg = np.zeros((4, 4, 4))
        for c in range(4):
            step = np.zeros(4)
            step[c] = h
            dg[c] = (metric_at(p + step) - metric_at(p - step)) / (2 * h)
        G = metric_at(p)
        if abs(np.linalg.det(G)) < 1e-12:
            raise SingularMetric(f"at {tuple(p)}")
        ginv = np.linalg.inv(G)
        # lowered[l, i, j] = (∂_i g_jl + ∂_j g_il - ∂_l g_ij) / 2
        lowered = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
        return np.einsum("kl,lij->kij", ginv, lowered)

    p = np.asarray(point, dtype=float)
    gamma = gamma_at(p)
    dgamma = np.zeros((4, 4, 4, 4))
    for c in range(4):
        step = np.zeros(4)
        step[c] = h
        dgamma[c] = (gamma_at(p + step) - gamma_at(p - step)) / (2 * h)
    # R[l, i, j, k] = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik
    R = (np.einsum("iljk->lijk", dgamma) - np.einsum("jlik->lijk", dgamma)
         + np.einsum("lim,mjk->lijk", gamma, gamma) - np.einsum("ljm,mik->lijk", gamma, gamma))
    return np.einsum("iijk->jk", R)


def evaluate_matrix(m: Sequence[Sequence[Scalar]], values: Dict[str, float]) -> np.ndarray:
    return np.array([[value.compile()(values) for value in row] for row in m])


def oracle_points(count: Optional[int] = None, seed: Optional[int] = None, radius: float = 1.5) -> np.ndarray:
    """Uniform random points in [-radius, radius]^4; count and seed default to the config"""
    count = Config.ORACLE_POINTS if count is None else count
    rng = np.random.default_rng(Config.ORACLE_SEED if seed is None else seed)
    return rng.uniform(-radius, radius, size=(count, 4))


def oracle_agrees(g: MetricInstance, points: np.ndarray, h: Optional[float] = None,
                  rtol: Optional[float] = None) -> bool:
    """Symbolic coordinate Ricci against the finite-difference oracle at every point"""
    rtol = rtol or Config.ORACLE_RTOL
    exact = coordinate_ricci(g).components
    base = _float_binding(g)
    for p in points:
        values = dict(base)
        values.update(zip(COORDS, (float(v) for v in p)))
        expected = evaluate_matrix(exact, values)
        approx = numeric_curvature_oracle(g, p, h)
        if not np.allclose(approx, expected, rtol=rtol, atol=rtol):
            return False
    return True

