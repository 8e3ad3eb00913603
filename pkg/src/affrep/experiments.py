"""Named, reproducible experiments and their reports.

Each experiment computes exact quantities and compares them to an expected
value carrying a provenance tag.  Reports are plain dicts; the canonical
JSON form sorts keys and keeps all volatile data (runtime, timestamp)
under ``meta``.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from itertools import combinations

from .affine_rep import check_affine_axiom, from_pair
from .ce_cohomology import (
    Cochain,
    CohomologyError,
    class_coordinates,
    coboundary,
    cohomology,
    full_complex,
    induced_map,
    is_coboundary,
    weight_zero_subcomplex,
)
from .exact_linalg import SparseMatrix, rank, solve
from .lie_core import (
    LieAlgebra,
    Representation,
    adjoint_rep,
    check_lie_algebra,
    check_representation,
    direct_sum_rep,
    sl2,
    sl2_standard,
    trivial_rep,
)
from .poly_module import alpha_cocycle, connecting, filtration_ses
from .tensor_fields import (
    Connection,
    alpha_one,
    desk_classification,
    desk_connecting,
    desk_equivariant_maps,
    desk_h0,
    desk_h1,
    field_cochain,
    kappa_cocycle,
    pr,
    pr_tr_vectors,
    prettr_solve,
    s12_graded_module,
    sl_projective,
    trace,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "CATALOG",
    "run",
    "run_all",
    "run_checks",
    "canonical_json",
    "emit",
    "exit_code",
    "les_check",
    "alpha_class_check",
]

SCALE_NOTE = "verified at desk scale (R^m, polynomial coefficients, stated bounds)"


class ConfigError(ValueError):
    """Parameters outside the documented feasibility bounds."""


@dataclass
class ExperimentConfig:
    experiment: str = "all"
    m: int = 2
    degree: int = 4
    window: tuple = (0, 5)
    format: str = "json"
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {"experiment", "m", "degree", "window", "format", "params"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = cls(**{k: v for k, v in data.items() if k != "window"})
        if "window" in data:
            cfg.window = tuple(data["window"])
        return cfg

    def validate(self) -> "ExperimentConfig":
        if not isinstance(self.m, int) or self.m not in (2, 3):
            raise ConfigError(f"m must be 2 or 3 (got {self.m})")
        if not isinstance(self.degree, int) or not 2 <= self.degree <= 6:
            raise ConfigError(f"degree must satisfy 2 <= degree <= 6 (got {self.degree})")
        w = self.window
        if len(w) != 2 or not all(isinstance(x, int) for x in w):
            raise ConfigError(f"window must be two integers (got {w})")
        if w[0] > 1 or w[1] < 3:
            raise ConfigError(f"window {list(w)} must contain [1, 3] for the degree-2 weight-zero complex")
        if self.format not in ("json", "csv", "md"):
            raise ConfigError(f"format must be json, csv or md (got {self.format})")
        if self.experiment != "all" and self.experiment not in CATALOG:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {sorted(CATALOG)}")
        return self

    def as_params(self) -> dict:
        return {"m": self.m, "degree": self.degree, "window": list(self.window)}


def _j(x):
    """JSON-ready copy: rationals become "num/den" strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _j(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_j(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# experiments; each returns (computed, passed, details)

def _exp_lemme1_h1(cfg):
    M = s12_graded_module(cfg.m, cfg.window, trace_free=True)
    cx = weight_zero_subcomplex(M.graded, 1)
    res = cohomology(M.graded, 1, cx)
    full = cohomology(s12_graded_module(cfg.m, cfg.window).graded, 1)
    details = {"cochain_dims": [cx.dim(p) for p in range(3)], "cocycle_rank": res.cocycle_rank,
               "boundary_rank": res.boundary_rank, "full_module_h1": full.dimension}
    return res.dimension, res.dimension == 0, details


def _exp_lemme1_h2(cfg):
    M = s12_graded_module(cfg.m, cfg.window)
    cx = weight_zero_subcomplex(M.graded, 2)
    res = cohomology(M.graded, 2, cx)
    kappa = field_cochain(M, 2, kappa_cocycle(1, 0))
    is_cocycle = not cx.differential(2).apply(cx.vector(kappa))
    not_exact = is_cocycle and is_coboundary(kappa, cx) is None
    in_class = None
    if not_exact and res.dimension == 1:
        in_class = [str(x) for x in class_coordinates(res, kappa)]
    b_part = field_cochain(M, 2, kappa_cocycle(0, 1))
    computed = {"dim": res.dimension, "kappa_is_cocycle": is_cocycle, "kappa_not_coboundary": not_exact}
    details = {"cochain_dims": [cx.dim(p) for p in range(4)], "kappa_class_coordinates": in_class,
               "b_part_vanishes_on_sl": b_part.is_zero()}
    passed = computed == {"dim": 1, "kappa_is_cocycle": True, "kappa_not_coboundary": True}
    return computed, passed, details


def _tr_one(S):
    return alpha_one(trace(S))


def _exp_classify(cfg):
    H = desk_h1(cfg.m, cfg.degree)
    EM = desk_equivariant_maps(cfg.m)
    cls = desk_classification(H, [op.apply for op in EM.basis])
    names = sorted(n for c in cls.get("classes", []) for n in c["named"])
    computed = {"count": cls["count"], "classes": names}
    passed = cls["implemented"] and cls["count"] == 4 and names == sorted(["0", "L", "L^pr", "L^tr"])
    details = {"h1_dim": H.dim, "h1_unknowns": len(H.unknowns), "invariant_maps": EM.dim,
               "classification": cls}
    return computed, passed, details


def _exp_connectun(cfg):
    H = desk_h1(cfg.m, cfg.degree)
    vpr, vtr = pr_tr_vectors(H)
    B = SparseMatrix.from_columns([vpr, vtr], len(H.unknowns))
    c_tr = solve(B, desk_connecting(H, _tr_one))
    c_pr = solve(B, desk_connecting(H, pr))
    ok = c_tr is not None and c_pr is not None
    sign = None
    if ok:
        # chi(tr.1) should be a multiple of L^tr and chi(pr) a multiple of L^pr
        ok = c_tr[0] == 0 and c_pr[1] == 0 and c_tr[1] != 0 and c_pr[0] != 0
        if ok and c_tr[1] == c_pr[0] and abs(c_tr[1]) == 1:
            sign = int(c_tr[1])
        else:
            ok = False
    computed = {"chi(tr.1)": [str(x) for x in c_tr] if c_tr else None,
                "chi(pr)": [str(x) for x in c_pr] if c_pr else None, "global_sign": sign}
    details = {"basis": ["L^pr", "L^tr"], "h1_dim": H.dim}
    return computed, ok and H.dim == 2, details


def _exp_prettr(cfg):
    r = prettr_solve(cfg.m)
    ok = r["solution_dim"] == 1 and r.get("p", 0) != 0 and r.get("q", 0) != 0 and r.get("r", 0) != 0
    computed = {"solution_dim": r["solution_dim"], "p": str(r.get("p")), "q": str(r.get("q"))}
    return computed, ok, {"equations": r["equations"], "normalization": "coefficient of dD is 1"}


def _exp_h0(cfg):
    r = desk_h0(cfg.m, field_degree=2, coeff_degree=cfg.degree)
    return r["kernel_dim"], r["kernel_dim"] == 0, {"unknowns": r["unknowns"], "equations": r["equations"]}


def _exp_equivariant(cfg):
    EM = desk_equivariant_maps(cfg.m)
    computed = {"dim": EM.dim, "span_equals_pr_tr": EM.span_equals_pr_tr}
    passed = EM.dim == 2 and EM.span_equals_pr_tr
    return computed, passed, {"unknowns": EM.unknowns, "stages": EM.stages, "order": EM.order,
                              "coeff_degree": EM.coeff_degree, "field_degree": EM.field_degree}


def les_check(A, W, k: int = 1) -> dict:
    """Ranks along the long exact sequence of ``0 -> P^{k-1} -> P^k -> S^k -> 0``.

    At each node ``dim H = rank(incoming) + rank(outgoing)``; the sequence
    runs up to the top degree ``dim L`` where every outgoing map is zero.
    """
    Pk1, Pk, Sk, inc, proj = filtration_ses(A, W, k)
    top = A.algebra.dim
    H = {}
    for name, mod in (("P_low", Pk1), ("P", Pk), ("S", Sk)):
        cx = full_complex(mod.rep, top)
        H[name] = [cohomology(mod.rep, p, cx) for p in range(top + 1)]
    ranks = {}
    for p in range(top + 1):
        ranks[("inc", p)] = rank(induced_map(inc, H["P_low"][p], H["P"][p]))
        ranks[("proj", p)] = rank(induced_map(proj, H["P"][p], H["S"][p]))
        if p < top:
            cols = [class_coordinates(H["P_low"][p + 1], connecting(t, A, W, k, Sk, Pk1))
                    for t in H["S"][p].representatives]
            ranks[("chi", p)] = rank(SparseMatrix.from_columns(cols, H["P_low"][p + 1].dimension))
        else:
            ranks[("chi", p)] = 0
    nodes = []
    for p in range(top + 1):
        for name, incoming, outgoing in (
            ("P_low", ranks.get(("chi", p - 1), 0), ranks[("inc", p)]),
            ("P", ranks[("inc", p)], ranks[("proj", p)]),
            ("S", ranks[("proj", p)], ranks[("chi", p)]),
        ):
            dim = H[name][p].dimension
            nodes.append({"module": name, "degree": p, "dim": dim, "rank_in": incoming,
                          "rank_out": outgoing, "exact": dim == incoming + outgoing})
    return {"nodes": nodes, "exact": all(n["exact"] for n in nodes)}


def alpha_class_check(A, B) -> dict:
    """Compare ``[alpha^1_{A,A}]`` and ``[alpha^1_{B,A}]`` and ``c_A``, ``c_B``.

    Both cocycles live in ``Hom(S^1(V, V), P^0(V))`` which only depends on
    the common linear part.
    """
    W = A.model
    ca, Hm, _, _ = alpha_cocycle(A, W, 1)
    cb, _, _, _ = alpha_cocycle(B, W, 1)
    diff = Cochain(1, Hm, ca.coords) - Cochain(1, Hm, cb.coords)
    alpha_equal = is_coboundary(diff) is not None
    gdiff = A.gamma0 - Cochain(1, A.model, B.gamma0.coords)
    c_equal = is_coboundary(gdiff) is not None
    return {"alpha_equal": alpha_equal, "c_equal": c_equal}


def _sl2_affine():
    L = sl2()
    V = direct_sum_rep(sl2_standard(L), trivial_rep(L, 1))
    g = coboundary(Cochain(0, V, {((), 0): 1, ((), 1): 2, ((), 2): 5}))
    return from_pair(V, g)


def _aff_pair():
    L = LieAlgebra.from_antisymmetric(2, {(0, 1): {1: 1}}, ["h", "e"])
    R = Representation(L, 1, [SparseMatrix.identity(1), SparseMatrix.zeros(1, 1)])
    # gamma(e) = 1 is a cocycle that is not a coboundary: rho(e) = 0, [h, e] = e
    g = Cochain(1, R, {((1,), 0): 1})
    return from_pair(R, g), from_pair(R, Cochain.zero(1, R))


def _exp_les(cfg):
    A = _sl2_affine()
    les = les_check(A, A.model, 1)
    B = from_pair(A.model, Cochain.zero(1, A.model))
    same = alpha_class_check(A, B)
    A1, A2 = _aff_pair()
    diff = alpha_class_check(A1, A2)
    les_aff = les_check(A1, A1.model, 1)
    iff_ok = (same["alpha_equal"] == same["c_equal"] == True) and (diff["alpha_equal"] == diff["c_equal"] == False)
    exact = les["exact"] and les_aff["exact"]
    computed = {"exact": exact, "alpha_iff_c": iff_ok}
    details = {"nodes": les["nodes"], "nodes_nontrivial_class": les_aff["nodes"], "equal_pair": same,
               "unequal_pair": diff, "gamma0_nonzero": not A.gamma0.is_zero()}
    return computed, exact and iff_ok and not A.gamma0.is_zero(), details


CATALOG = {
    "lemme1-h1": (_exp_lemme1_h1, 0, "PAPER",
                  "dim H^1(sl_{m+1}, trace-free S^1_2) at Euler weight 0"),
    "lemme1-h2": (_exp_lemme1_h2, {"dim": 1, "kappa_is_cocycle": True, "kappa_not_coboundary": True}, "PAPER",
                  "dim H^2(sl_{m+1}, S^1_2) at Euler weight 0 and the divergence cocycle"),
    "classify-s12": (_exp_classify, {"count": 4, "classes": ["0", "L", "L^pr", "L^tr"]}, "PAPER",
                     "affine representations inducing S^1_2"),
    "connectun": (_exp_connectun, "chi maps (tr.1, pr) onto (+-L^tr, +-L^pr) with one global sign", "PAPER",
                  "connecting homomorphism on invariant maps"),
    "prettr": (_exp_prettr, "one-dimensional solution line with p, q nonzero", "PAPER",
               "p 0L(X)(P) + q 0L^tr(X)(P) = (dD)(X)(P)"),
    "h0-vanish": (_exp_h0, 0, "PAPER", "invariant S^1_2 tensors"),
    "equivariant-maps": (_exp_equivariant, {"dim": 2, "span_equals_pr_tr": True}, "PAPER",
                         "equivariant differential operators S^1_2 -> S^1_2"),
    "les-exactness": (_exp_les, {"exact": True, "alpha_iff_c": True}, "DERIVED",
                      "long exact sequence for k = 1 on a synthetic sl_2 affine representation"),
}


def run(cfg: ExperimentConfig) -> dict:
    cfg.validate()
    if cfg.experiment not in CATALOG:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    fn, expected, tag, what = CATALOG[cfg.experiment]
    t0 = time.perf_counter()
    try:
        computed, passed, details = fn(cfg)
        error = None
    except (CohomologyError, ValueError) as exc:
        computed, passed, details, error = None, False, {}, str(exc)
    runtime = time.perf_counter() - t0
    report = {
        "experiment": cfg.experiment,
        "description": what,
        "parameters": cfg.as_params(),
        "expected": _j(expected),
        "provenance": tag,
        "computed": _j(computed),
        "pass": bool(passed),
        "details": _j(details),
        "scope": SCALE_NOTE,
        "meta": {"runtime_s": round(runtime, 3)},
    }
    if error:
        report["error"] = error
    return report


def run_all(cfg: ExperimentConfig) -> list:
    cfg.validate()
    out = []
    for name in sorted(CATALOG):
        sub = ExperimentConfig(name, cfg.m, cfg.degree, tuple(cfg.window), cfg.format, dict(cfg.params))
        out.append(run(sub))
    return out


# ---------------------------------------------------------------------------
# validation suite

def run_checks(m: int = 2, samples: int = 20, seed: int = 0) -> list:
    """Axiom checks on every constructed algebra, module and affine representation."""
    rnd = random.Random(seed)
    results = []

    def record(name, ok, detail=""):
        results.append({"check": name, "pass": bool(ok), "detail": detail})

    L = sl2()
    record("sl2 Lie algebra axioms", not check_lie_algebra(L))
    P = sl_projective(m)
    record(f"sl_{m + 1} projective algebra axioms", not check_lie_algebra(P.algebra),
           f"dim {P.algebra.dim}")
    record(f"sl_{m + 1} Euler weights in -1..1", set(P.weights()) <= {-1, 0, 1})
    for name, R in (("adjoint", adjoint_rep(L)), ("standard", sl2_standard(L)), ("trivial", trivial_rep(L, 1))):
        record(f"sl2 {name} representation", not check_representation(R))
    for name, R in (("sl2 adjoint", adjoint_rep(L)), ("sl2 standard", sl2_standard(L))):
        bad = 0
        for p in range(3):
            for _ in range(samples):
                coords = {(I, v): Fraction(rnd.randint(-5, 5))
                          for I in combinations(range(L.dim), p) for v in range(R.space_dim)}
                bad += not coboundary(coboundary(Cochain(p, R, coords))).is_zero()
        record(f"d o d = 0 ({name})", bad == 0, f"{3 * samples} random cochains")
    M = s12_graded_module(m, (0, 5))
    cx = weight_zero_subcomplex(M.graded, 2)
    ok = all((cx.differential(p + 1) @ cx.differential(p)).is_zero() for p in range(2))
    record(f"d o d = 0 (sl_{m + 1} on S12, weight 0)", ok, f"cochain dims {[cx.dim(p) for p in range(4)]}")
    A = _sl2_affine()
    pts = [{i: Fraction(rnd.randint(-4, 4)) for i in range(A.dim)} for _ in range(10)]
    record("affine axiom (sl2 on R^2 + R)", not check_affine_axiom(A, pts))
    A1, _ = _aff_pair()
    record("affine axiom (2-dim non-abelian algebra on R)",
           not check_affine_axiom(A1, [{0: Fraction(rnd.randint(-4, 4))} for _ in range(10)]))
    return results


# ---------------------------------------------------------------------------
# output

def canonical_json(reports) -> str:
    return json.dumps(reports, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "provenance", "pass", "expected", "computed", "runtime_s"])
    for r in reports:
        w.writerow([r["experiment"], r["provenance"], r["pass"],
                    json.dumps(r["expected"], sort_keys=True), json.dumps(r["computed"], sort_keys=True),
                    r.get("meta", {}).get("runtime_s", "")])
    return buf.getvalue()


def _md(reports) -> str:
    lines = ["| experiment | provenance | pass | expected | computed |", "|---|---|---|---|---|"]
    for r in reports:
        lines.append("| {} | [{}] | {} | `{}` | `{}` |".format(
            r["experiment"], r["provenance"], "PASS" if r["pass"] else "FAIL",
            json.dumps(r["expected"], sort_keys=True), json.dumps(r["computed"], sort_keys=True)))
    lines.append("")
    lines.append(f"All results {SCALE_NOTE}.")
    return "\n".join(lines) + "\n"


def emit(reports, fmt: str = "json", timestamp: bool = False) -> str:
    if fmt == "json":
        if timestamp:
            return canonical_json({"meta": {"generated": datetime.now(timezone.utc).isoformat()},
                                   "reports": reports})
        return canonical_json(reports)
    if fmt == "csv":
        return _csv(reports)
    if fmt == "md":
        return _md(reports)
    raise ConfigError(f"unknown format {fmt!r}")


def exit_code(reports) -> int:
    return 0 if all(r["pass"] for r in reports) else 1
