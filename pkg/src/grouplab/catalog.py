"""Group ingestion, builtin families, reports, and batch orchestration.

Catalog files are JSON documents describing one group each, either as a
full multiplication table, as permutation generators, or as a builtin
family descriptor. Reports aggregate every invariant the library computes
for one group and serialize deterministically: two runs with the same
inputs, configuration and version produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .cohomology import DEFAULT_ORACLE_CAP, b0_lower_bound, h2_order, multiplier_order_oracle
from .errors import (
    InternalCheckFailed,
    ParamOutOfRange,
    ParseError,
    UnknownFamily,
    ValidationError,
)
from .fpgroups import DEFAULT_MAX_COSETS
from .groups import (
    FiniteGroup,
    abelian_invariants,
    build_from_permutations,
    center,
    derived_subgroup,
    direct_product,
    from_mul_table,
    quotient,
)
from .wedge import (
    DEFAULT_CURLY_CAP,
    DEFAULT_EXTERIOR_CAP,
    WedgeVariant,
    compute_wedge,
)

SCHEMA_VERSION = 1


# --- builtin families ---------------------------------------------------------


def _cyclic(n: int) -> FiniteGroup:
    return from_mul_table(
        [[(i + j) % n for j in range(n)] for i in range(n)],
        label=f"Z{n}",
        validate=False,
    )


def _dihedral(n: int) -> FiniteGroup:
    # elements r^i s^j with s r s = r^-1; index = j*n + i
    def mul(e1, e2):
        i1, j1 = e1
        i2, j2 = e2
        return ((i1 + (i2 if j1 == 0 else -i2)) % n, (j1 + j2) % 2)

    elems = [(i, j) for j in range(2) for i in range(n)]
    idx = {e: k for k, e in enumerate(elems)}
    return from_mul_table(
        [[idx[mul(a, b)] for b in elems] for a in elems], label=f"D{n}", validate=False
    )


def _dicyclic(n: int) -> FiniteGroup:
    # order 4n: a^(2n) = 1, b^2 = a^n, b a b^-1 = a^-1
    nn = 2 * n

    def mul(e1, e2):
        i1, j1 = e1
        i2, j2 = e2
        i = (i1 + (i2 if j1 == 0 else -i2)) % nn
        if j1 and j2:
            i = (i + n) % nn
        return (i, (j1 + j2) % 2)

    elems = [(i, j) for j in range(2) for i in range(nn)]
    idx = {e: k for k, e in enumerate(elems)}
    return from_mul_table(
        [[idx[mul(a, b)] for b in elems] for a in elems], label=f"Dic{n}", validate=False
    )


def _symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        return _cyclic(1)
    gens = [[1, 0] + list(range(2, n)), list(range(1, n)) + [0]]
    return build_from_permutations(gens, cap=200, label=f"S{n}")


def _alternating(n: int) -> FiniteGroup:
    if n <= 2:
        return _cyclic(1)
    three_cycles = []
    for c in range(2, n):
        perm = list(range(n))
        perm[0], perm[1], perm[c] = perm[1], perm[c], perm[0]
        three_cycles.append(perm)
    return build_from_permutations(three_cycles, cap=200, label=f"A{n}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _elementary(p: int, k: int) -> FiniteGroup:
    if not _is_prime(p):
        raise ParamOutOfRange(f"elementary family needs a prime, got {p}")
    if k < 1 or p**k > 512:
        raise ParamOutOfRange(f"elementary p^k out of range: {p}^{k}")
    G = _cyclic(p)
    for _ in range(k - 1):
        G = direct_product(G, _cyclic(p))
    return from_mul_table(G.mul, label=f"E{p}^{k}", validate=False)


def _extraspecial(p: int, exponent_type: str) -> FiniteGroup:
    if p not in (3, 5):
        raise ParamOutOfRange(f"extraspecial family supports p in {{3, 5}}, got {p}")
    if exponent_type == "p":
        elems = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
        idx = {e: i for i, e in enumerate(elems)}

        def mul(e1, e2):
            return (
                (e1[0] + e2[0]) % p,
                (e1[1] + e2[1]) % p,
                (e1[2] + e2[2] + e1[0] * e2[1]) % p,
            )

        return from_mul_table(
            [[idx[mul(a, b)] for b in elems] for a in elems],
            label=f"ES{p}^3+",
            validate=False,
        )
    if exponent_type in ("p2", "p^2"):
        pp = p * p
        elems = [(i, j) for i in range(pp) for j in range(p)]
        idx = {e: i for i, e in enumerate(elems)}
        powers = [pow(1 + p, j, pp) for j in range(p)]

        def mul(e1, e2):
            return ((e1[0] + e2[0] * powers[e1[1]]) % pp, (e1[1] + e2[1]) % p)

        return from_mul_table(
            [[idx[mul(a, b)] for b in elems] for a in elems],
            label=f"ES{p}^3-",
            validate=False,
        )
    raise ParamOutOfRange(f"extraspecial exponent type must be 'p' or 'p2', got {exponent_type!r}")


def builtin(family: str, params: Sequence = ()) -> FiniteGroup:
    """Construct a named builtin group family member."""
    fam = family.lower()
    if fam == "cyclic":
        (n,) = params
        n = int(n)
        if n < 1 or n > 512:
            raise ParamOutOfRange(f"cyclic order out of range: {n}")
        return _cyclic(n)
    if fam == "dihedral":
        (n,) = params
        n = int(n)
        if n < 1 or 2 * n > 512:
            raise ParamOutOfRange(f"dihedral parameter out of range: {n}")
        return _dihedral(n)
    if fam == "dicyclic":
        (n,) = params
        n = int(n)
        if n < 1 or 4 * n > 512:
            raise ParamOutOfRange(f"dicyclic parameter out of range: {n}")
        return _dicyclic(n)
    if fam == "quaternion8":
        if params:
            raise ParamOutOfRange("quaternion8 takes no parameters")
        return _dicyclic(2)
    if fam == "symmetric":
        (n,) = params
        n = int(n)
        if n < 1 or n > 5:
            raise ParamOutOfRange(f"symmetric degree must be 1..5, got {n}")
        return _symmetric(n)
    if fam == "alternating":
        (n,) = params
        n = int(n)
        if n < 1 or n > 5:
            raise ParamOutOfRange(f"alternating degree must be 1..5, got {n}")
        return _alternating(n)
    if fam == "elementary":
        p, k = params
        return _elementary(int(p), int(k))
    if fam == "extraspecial":
        p, exponent_type = params
        return _extraspecial(int(p), str(exponent_type))
    if fam == "direct_product":
        if len(params) < 2:
            raise ParamOutOfRange("direct_product needs at least two factor descriptors")
        factors = []
        for desc in params:
            if isinstance(desc, dict):
                factors.append(builtin(desc["family"], desc.get("params", ())))
            elif isinstance(desc, (list, tuple)):
                factors.append(builtin(desc[0], desc[1:]))
            else:
                raise ParamOutOfRange(f"bad direct_product factor descriptor: {desc!r}")
        total = 1
        for fac in factors:
            total *= fac.order
        if total > 512:
            raise ParamOutOfRange(f"direct product order {total} exceeds the core cap 512")
        G = factors[0]
        for fac in factors[1:]:
            G = direct_product(G, fac)
        return G
    raise UnknownFamily(f"unknown builtin family {family!r}")


# --- group spec files ---------------------------------------------------------


def group_from_spec_dict(doc: dict, origin: str = "<spec>") -> FiniteGroup:
    try:
        name = str(doc["name"])
        kind = str(doc["kind"])
        data = doc["data"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field {exc}", path=origin) from exc
    if kind == "cayley":
        table = data.get("table")
        if not isinstance(table, list):
            raise ParseError("cayley data needs a 'table' array", path=origin)
        G = from_mul_table(table, label=name, element_names=data.get("element_names"))
        return G
    if kind == "perm":
        gens = data.get("generators")
        if not isinstance(gens, list):
            raise ParseError("perm data needs a 'generators' array", path=origin)
        G = build_from_permutations(gens, cap=512, degree=data.get("degree"), label=name)
        return G
    if kind == "builtin":
        fam = data.get("family")
        if not isinstance(fam, str):
            raise ParseError("builtin data needs a 'family' name", path=origin)
        G = builtin(fam, data.get("params", ()))
        return FiniteGroup(
            order=G.order,
            mul=G.mul,
            inv=G.inv,
            label=name,
            element_names=G.element_names,
        )
    raise ParseError(f"unknown group kind {kind!r}", path=origin)


def load_catalog(path: str | Path) -> list[FiniteGroup]:
    """Load and validate all *.json group specs under a directory, name-sorted."""
    root = Path(path)
    if not root.is_dir():
        raise ParseError("catalog path is not a directory", path=str(root))
    groups: dict[str, FiniteGroup] = {}
    for f in sorted(root.glob("*.json")):
        try:
            doc = json.loads(f.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, path=str(f), position=f"line {exc.lineno} col {exc.colno}") from exc
        G = group_from_spec_dict(doc, origin=str(f))
        if G.label in groups:
            raise ValidationError(f"duplicate group name {G.label!r} in catalog")
        groups[G.label] = G
    return [groups[name] for name in sorted(groups)]


def save_catalog(groups: Sequence[FiniteGroup], path: str | Path) -> list[Path]:
    """Write groups as cayley-kind spec files; inverse of load_catalog."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for G in groups:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "name": G.label,
            "kind": "cayley",
            "data": {"table": [list(row) for row in G.mul]},
        }
        if G.element_names is not None:
            doc["data"]["element_names"] = list(G.element_names)
        out = root / f"{G.label}.json"
        out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        written.append(out)
    return written


# --- shipped corpus -----------------------------------------------------------

CORPUS_SPECS: tuple[tuple[str, str, tuple], ...] = (
    ("A4", "alternating", (4,)),
    ("D4", "dihedral", (4,)),
    ("D6", "dihedral", (6,)),
    ("Dic3", "dicyclic", (3,)),
    ("ES27p", "extraspecial", (3, "p")),
    ("ES27p2", "extraspecial", (3, "p2")),
    ("Q8", "quaternion8", ()),
    ("S3", "symmetric", (3,)),
    ("S3xZ2", "direct_product", (("symmetric", 3), ("cyclic", 2))),
    ("S3xZ4", "direct_product", (("symmetric", 3), ("cyclic", 4))),
    ("Z1", "cyclic", (1,)),
    ("Z2", "cyclic", (2,)),
    ("Z3", "cyclic", (3,)),
    ("Z4", "cyclic", (4,)),
    ("Z5", "cyclic", (5,)),
    ("Z6", "cyclic", (6,)),
    ("Z7", "cyclic", (7,)),
    ("Z8", "cyclic", (8,)),
    ("Z9", "cyclic", (9,)),
    ("Z10", "cyclic", (10,)),
    ("Z11", "cyclic", (11,)),
    ("Z12", "cyclic", (12,)),
    ("Z13", "cyclic", (13,)),
    ("Z14", "cyclic", (14,)),
    ("Z15", "cyclic", (15,)),
    ("Z16", "cyclic", (16,)),
    ("Z2xZ2", "direct_product", (("cyclic", 2), ("cyclic", 2))),
    ("Z4xZ2", "direct_product", (("cyclic", 4), ("cyclic", 2))),
    ("Z2xZ2xZ2", "direct_product", (("cyclic", 2), ("cyclic", 2), ("cyclic", 2))),
    ("Z3xZ3", "direct_product", (("cyclic", 3), ("cyclic", 3))),
    ("Z6xZ2", "direct_product", (("cyclic", 6), ("cyclic", 2))),
    ("Z8xZ2", "direct_product", (("cyclic", 8), ("cyclic", 2))),
    ("Z4xZ4", "direct_product", (("cyclic", 4), ("cyclic", 4))),
    ("Z4xZ2xZ2", "direct_product", (("cyclic", 4), ("cyclic", 2), ("cyclic", 2))),
    ("Z2xZ2xZ2xZ2", "direct_product", (("cyclic", 2),) * 4),
)


def shipped_corpus() -> list[FiniteGroup]:
    """The groups the acceptance suite runs over, in name order."""
    out = []
    for name, family, params in CORPUS_SPECS:
        G = builtin(family, params)
        out.append(
            FiniteGroup(order=G.order, mul=G.mul, inv=G.inv, label=name, element_names=G.element_names)
        )
    return sorted(out, key=lambda g: g.label)


def write_corpus_catalog(path: str | Path) -> list[Path]:
    """Materialize the shipped corpus as builtin-kind spec files."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for name, family, params in sorted(CORPUS_SPECS):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "name": name,
            "kind": "builtin",
            "data": {"family": family, "params": [list(p) if isinstance(p, tuple) else p for p in params]},
        }
        out = root / f"{name}.json"
        out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        written.append(out)
    return written


# --- configuration and reports -------------------------------------------------


@dataclass(frozen=True)
class PipelineConfig:
    max_cosets: int = DEFAULT_MAX_COSETS
    curly_cap: int = DEFAULT_CURLY_CAP
    exterior_cap: int = DEFAULT_EXTERIOR_CAP
    oracle_cap: int = DEFAULT_ORACLE_CAP
    oracle: bool = False
    jobs: int = 1
    timings: bool = False
    fuzz_trials: int = 100
    seed: int = 0

    def config_hash(self) -> str:
        payload = json.dumps(
            {
                "max_cosets": self.max_cosets,
                "curly_cap": self.curly_cap,
                "exterior_cap": self.exterior_cap,
                "oracle_cap": self.oracle_cap,
                "oracle": self.oracle,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class InvariantReport:
    """All computed invariants of one group, serialization-ready."""

    group: str
    order: int
    center_order: int
    derived_order: int
    abelianization: list[int]
    curly_order: int
    kernel_order: int
    kernel_invariants: list[int]
    exterior: dict | None
    oracle: dict | None
    family_id: int | None
    witness_refs: list[str]
    timing_ms: int | None
    tool_version: str
    config_hash: str

    def to_json_dict(self) -> dict:
        doc = {"schema_version": SCHEMA_VERSION}
        doc.update(asdict(self))
        if self.curly_order != self.kernel_order * self.derived_order:
            raise InternalCheckFailed(
                f"report for {self.group} is inconsistent: "
                f"{self.curly_order} != {self.kernel_order} * {self.derived_order}"
            )
        return doc

    @staticmethod
    def from_json_dict(doc: dict) -> "InvariantReport":
        data = {k: v for k, v in doc.items() if k != "schema_version"}
        return InvariantReport(**data)


def compute_report(
    G: FiniteGroup, config: PipelineConfig = PipelineConfig()
) -> InvariantReport:
    """Run the full per-group pipeline under the given caps."""
    started = time.monotonic()
    Z = center(G)
    D = derived_subgroup(G)
    ab_group, _ = quotient(G, D)
    ab = abelian_invariants(ab_group)
    wr = compute_wedge(
        G, WedgeVariant.CURLY, max_cosets=config.max_cosets, group_cap=config.curly_cap
    )
    kernel_inv = wr.kernel_invariants()
    exterior: dict | None = None
    if G.order <= config.exterior_cap:
        wx = compute_wedge(
            G,
            WedgeVariant.EXTERIOR,
            max_cosets=config.max_cosets,
            group_cap=config.exterior_cap,
        )
        exterior = {"order": wx.order, "multiplier_order": len(wx.kernel)}
    oracle: dict | None = None
    if config.oracle and G.order <= config.oracle_cap:
        m = G.order
        h2, h2_inv = h2_order(G, m, cap=config.oracle_cap)
        mult = multiplier_order_oracle(G, cap=config.oracle_cap)
        b0, b0_inv = b0_lower_bound(G, m, cap=config.oracle_cap)
        oracle = {
            "modulus": m,
            "h2_order": h2,
            "h2_invariants": list(h2_inv.factors),
            "multiplier_order": mult,
            "multiplier_agrees": (
                exterior["multiplier_order"] == mult if exterior is not None else None
            ),
            "b0_lower_bound": b0,
            "b0_invariants": list(b0_inv.factors),
            "b0_le_kernel": b0 <= len(wr.kernel),
            "b0_equals_kernel": b0 == len(wr.kernel),
        }
    elapsed_ms = int((time.monotonic() - started) * 1000)
    return InvariantReport(
        group=G.label,
        order=G.order,
        center_order=len(Z),
        derived_order=len(D),
        abelianization=list(ab.factors),
        curly_order=wr.order,
        kernel_order=len(wr.kernel),
        kernel_invariants=list(kernel_inv.factors),
        exterior=exterior,
        oracle=oracle,
        family_id=None,
        witness_refs=[],
        timing_ms=elapsed_ms if config.timings else None,
        tool_version=__version__,
        config_hash=config.config_hash(),
    )


def report_to_text(doc: dict) -> str:
    parts = [
        f"{doc['group']}: |G|={doc['order']} |Z|={doc['center_order']} "
        f"|G'|={doc['derived_order']} pairing_order={doc['curly_order']} "
        f"kernel_invariants={doc['kernel_invariants']}"
    ]
    if doc.get("exterior"):
        parts.append(f"multiplier={doc['exterior']['multiplier_order']}")
    if doc.get("oracle"):
        o = doc["oracle"]
        parts.append(
            f"oracle_mult={o['multiplier_order']} b0_bound={o['b0_lower_bound']}"
        )
    return "  ".join(parts)


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
