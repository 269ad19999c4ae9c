"""Curated test pairs and recorded convexity witnesses.

The fixture set is generated once and frozen into matrix files under
``pwcalc/data/fixtures`` so golden tests do not drift with the random
number generator. Regenerate with::

    python -m pwcalc.fixtures --out src/pwcalc/data/fixtures

Loading re-validates every metadata claim (commutativity, kernel ranks,
infinity flags) against fresh computations.
"""

from __future__ import annotations

import argparse
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import homfun
from .calculus import decompose, numerically_invertible
from .convexity import falsify_transformer, section_operator_convexity_scan
from .matfile import dumps, read_matrix_file, write_matrix_file
from .sampling import complex_gaussian, random_psd, random_unitary
from .spectral import RANK_TOL, commutator_norm, numerical_rank, opnorm

FIXTURE_SEED = 20201014
FALSIFY_SEED = 4
FALSIFY_DIMS = (2, 3, 4)
FALSIFY_TRIALS = 10_000
SECTION_SEED = 7
SECTION_TRIALS = 10_000

DATA_DIR = Path(__file__).parent / "data" / "fixtures"


def _r2_over_sum():
    return homfun.HomogeneousFunction(lambda t: t * t, "square_section")


# Sections t -> f(t, 1 - t) known to be operator convex, with a function
# realizing each one.
OPERATOR_CONVEX_SECTIONS = {
    "t^2": _r2_over_sum,
    "tlog(t/(1-t))": homfun.entropy_kernel,
    "t^2/(1-t)": lambda: homfun.power_perspective(2),
}


@dataclass
class FixturePair:
    id: str
    category: str
    A: np.ndarray
    B: np.ndarray
    meta: dict = field(default_factory=dict)


@dataclass
class FixtureSet:
    seed: int
    pairs: list
    witnesses: dict = field(default_factory=dict)

    def category(self, name):
        return [p for p in self.pairs if p.category == name]

    def singular(self):
        """Pairs with ``Ker(A + B) != 0``."""
        return [p for p in self.pairs if p.meta.get("kernel_rank", 0) > 0]


def _embed_psd(rng, basis, scale=1.0):
    """A PSD matrix with range exactly ``span(basis)``, moderately conditioned."""
    r = basis.shape[1]
    G = complex_gaussian(rng, (r, r))
    M = G @ G.conj().T / r + 0.25 * np.eye(r)
    out = scale * basis @ M @ basis.conj().T
    return (out + out.conj().T) / 2


def _commuting(rng, idx):
    n = int(rng.integers(2, 7))
    U = random_unitary(rng, n)
    a = rng.uniform(0.0, 3.0, n)
    b = rng.uniform(0.0, 3.0, n)
    if idx % 3 == 0:
        a[0] = 0.0
    if idx % 3 == 1:
        b[-1] = 0.0
        a[1 % n] = 0.0
    if idx % 4 == 0:
        # repeated eigenvalue in A
        a[-1] = a[0]

    def build(d):
        M = (U * d) @ U.conj().T
        return (M + M.conj().T) / 2

    A, B = build(a), build(b)
    return A, B, {"commuting": True}


def _kernel(rng, idx):
    n = int(rng.integers(3, 7))
    k0 = 1 + idx % min(2, n - 2)
    U = random_unitary(rng, n)
    H1 = U[:, k0:]
    A = _embed_psd(rng, H1)
    B = _embed_psd(rng, H1, scale=float(rng.uniform(0.5, 2.0)))
    return A, B, {"kernel_rank": k0}


def _random_subspace(rng, basis, dim):
    """Orthonormal basis of a random ``dim``-dimensional subspace of ``span(basis)``."""
    m = basis.shape[1]
    Q, _ = np.linalg.qr(complex_gaussian(rng, (m, dim)))
    return basis @ Q


def _infinity(rng, idx):
    a_extra, b_extra = [(0, 0), (0, 1), (1, 0), (1, 1)][idx % 4]
    n = int(rng.integers(3, 6))
    k0 = int(rng.integers(0, 2))
    U = random_unitary(rng, n)
    H1 = U[:, k0:]
    m = n - k0
    A = _embed_psd(rng, _random_subspace(rng, H1, m - a_extra))
    B = _embed_psd(rng, _random_subspace(rng, H1, m - b_extra))
    meta = {
        "kernel_rank": k0,
        "bs_infinite": bool(b_extra),
        "renyi_infinite": bool(a_extra),
    }
    return A, B, meta


def _invertible(rng, idx):
    n = int(rng.integers(2, 7))
    return random_psd(rng, n, 0.5) / n, random_psd(rng, n, 0.5) / n, {"invertible": True}


def _noncommuting_small(rng, idx):
    if idx < 2:
        # two rank-one projectors in C^2 at a random angle
        theta = float(rng.uniform(0.2, 1.3))
        p = np.array([1.0, 0.0])
        q = np.array([math.cos(theta), math.sin(theta)])
        return np.outer(p, p).astype(complex), np.outer(q, q).astype(complex), {"kernel_rank": 0}
    n = 2 + idx % 2
    return random_psd(rng, n, 0.05), random_psd(rng, n, 0.05), {"invertible": True}


def _block_diag(X, Y):
    n, m = X.shape[0], Y.shape[0]
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n] = X
    out[n:, n:] = Y
    return out


def _direct_sum(rng, idx):
    n1 = int(rng.integers(1, 4))
    n2 = int(rng.integers(1, 4))
    A1, B1 = random_psd(rng, n1, 0.2), random_psd(rng, n1, 0.2)
    A2, B2 = random_psd(rng, n2, 0.2), random_psd(rng, n2, 0.2)
    return _block_diag(A1, A2), _block_diag(B1, B2), {"blocks": [n1, n2], "invertible": True}


_CATEGORIES = (
    ("commuting", 12, _commuting),
    ("kernel", 12, _kernel),
    ("infinity", 20, _infinity),
    ("invertible", 12, _invertible),
    ("noncommuting", 6, _noncommuting_small),
    ("direct_sum", 4, _direct_sum),
)


def generate_fixture_set(seed: int = FIXTURE_SEED) -> FixtureSet:
    """Deterministic fixture pairs (no witnesses; see :func:`generate_witnesses`)."""
    pairs = []
    for c, (category, count, build) in enumerate(_CATEGORIES):
        for i in range(count):
            rng = np.random.default_rng([int(seed), c, i])
            A, B, meta = build(rng, i)
            pairs.append(FixturePair(f"{category}_{i:02d}", category, A, B, meta))
    return FixtureSet(int(seed), pairs)


def generate_witnesses() -> dict:
    """Run the documented searches and return the witnesses they find."""
    out = {}
    res = falsify_transformer(homfun.power_perspective(4), FALSIFY_DIMS, FALSIFY_TRIALS, FALSIFY_SEED, tol=1e-6)
    if res.witness is not None:
        out["perspective_t4"] = res.witness
    for dim in (2, 3):
        res = section_operator_convexity_scan(lambda t: t**4, (0.0, 4.0), dim, SECTION_TRIALS, SECTION_SEED)
        if res.witness is not None:
            out[f"section_t4_dim{dim}"] = res.witness
    return out


def validate_pair(p: FixturePair, rank_tol: float = RANK_TOL):
    """Raise ``AssertionError`` if ``p.meta`` disagrees with a fresh computation."""
    A, B, meta = p.A, p.B, p.meta
    if meta.get("commuting"):
        c = commutator_norm(A, B)
        assert c <= 1e-14 * max(1.0, opnorm(A) * opnorm(B)), f"{p.id}: ||[A,B]|| = {c}"
    if "kernel_rank" in meta:
        k = decompose(A, B, rank_tol).kernel_rank
        assert k == meta["kernel_rank"], f"{p.id}: kernel rank {k} != {meta['kernel_rank']}"
    if p.category == "kernel":
        assert meta["kernel_rank"] >= 1, f"{p.id}: kernel fixture without kernel"
    rank_sum = numerical_rank(A + B, rank_tol)
    if "bs_infinite" in meta:
        got = numerical_rank(B, rank_tol) < rank_sum
        assert got == meta["bs_infinite"], f"{p.id}: bs_infinite flag wrong"
    if "renyi_infinite" in meta:
        got = numerical_rank(A, rank_tol) < rank_sum
        assert got == meta["renyi_infinite"], f"{p.id}: renyi_infinite flag wrong"
    if meta.get("invertible"):
        assert numerically_invertible(A) and numerically_invertible(B), f"{p.id}: not invertible"


def write_fixture_set(fs: FixtureSet, out_dir, witnesses: dict | None = None):
    out_dir = Path(out_dir)
    (out_dir / "pairs").mkdir(parents=True, exist_ok=True)
    index = {"seed": fs.seed, "pairs": [], "witnesses": {}}
    for p in fs.pairs:
        write_matrix_file(out_dir / "pairs" / f"{p.id}_A.json", p.A, f"{p.id}_A")
        write_matrix_file(out_dir / "pairs" / f"{p.id}_B.json", p.B, f"{p.id}_B")
        index["pairs"].append({
            "id": p.id,
            "category": p.category,
            "A": f"pairs/{p.id}_A.json",
            "B": f"pairs/{p.id}_B.json",
            "meta": p.meta,
        })
    if witnesses:
        (out_dir / "witnesses").mkdir(exist_ok=True)
        for key, w in witnesses.items():
            files = {}
            for name, M in w.matrices.items():
                rel = f"witnesses/{key}_{name}.json"
                write_matrix_file(out_dir / rel, M, f"{key}_{name}", general=(name == "V"))
                files[name] = rel
            index["witnesses"][key] = {
                "kind": w.kind,
                "direction": w.direction,
                "seed": list(w.seed) if w.seed else None,
                "margin": w.margin,
                "files": files,
            }
    (out_dir / "index.json").write_text(dumps(index) + "\n", encoding="ascii")


def load_fixture_set(path=None, validate: bool = True) -> FixtureSet:
    """Read the frozen fixture set (packaged copy by default)."""
    from .convexity import Witness

    root = Path(path) if path is not None else DATA_DIR
    index = json.loads((root / "index.json").read_text(encoding="ascii"))
    pairs = []
    for entry in index["pairs"]:
        A = read_matrix_file(root / entry["A"]).matrix
        B = read_matrix_file(root / entry["B"]).matrix
        p = FixturePair(entry["id"], entry["category"], A, B, entry["meta"])
        if validate:
            validate_pair(p)
        pairs.append(p)
    witnesses = {}
    for key, w in index.get("witnesses", {}).items():
        mats = {name: read_matrix_file(root / rel).matrix for name, rel in w["files"].items()}
        seed = tuple(w["seed"]) if w["seed"] else None
        witnesses[key] = Witness(w["kind"], mats, float(w["margin"]), w["direction"], seed)
    return FixtureSet(int(index["seed"]), pairs, witnesses)


def main(argv=None):
    parser = argparse.ArgumentParser(description="Regenerate the frozen fixture set.")
    parser.add_argument("--out", default=str(DATA_DIR))
    parser.add_argument("--seed", type=int, default=FIXTURE_SEED)
    args = parser.parse_args(argv)
    fs = generate_fixture_set(args.seed)
    for p in fs.pairs:
        validate_pair(p)
    write_fixture_set(fs, args.out, generate_witnesses())
    print(f"wrote {len(fs.pairs)} pairs to {args.out}")


if __name__ == "__main__":
    main()
