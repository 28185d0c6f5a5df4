"""Pairing groups of a finite group and their commutator kernels.

For a finite group G, form the group generated by one symbol per ordered
pair (m, n) of elements of G subject to the crossed relations

    (mm', n)  = (m^m', m^n) (m, n)
    (m, nn')  = (m, n) (n^m, n^n')

together with a collapsing family:

  * CURLY:    (x, y) = 1 for every commuting pair [x, y] = 1;
  * EXTERIOR: (x, x) = 1 for every x (the non-abelian exterior square).

Mapping each symbol (m, n) to the commutator [m, n] extends to a
surjection kappa onto the derived subgroup; its kernel is the Bogomolov
kernel in the CURLY case and measures the Schur multiplier in the
EXTERIOR case. Both constructions are realized concretely by coset
enumeration, and kappa is rebuilt and verified rather than assumed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    GroupTooLarge,
    InternalCheckFailed,
    KappaRelatorViolation,
    NotAPairing,
    RelatorNotKilled,
)
from .fpgroups import (
    DEFAULT_MAX_COSETS,
    Presentation,
    Realization,
    preprocess_relators,
    realize,
    todd_coxeter,
)
from .groups import (
    AbelianInvariants,
    FiniteGroup,
    GroupHom,
    Subgroup,
    abelian_invariants,
    derived_subgroup,
)

DEFAULT_CURLY_CAP = 64
DEFAULT_EXTERIOR_CAP = 16


class WedgeVariant(enum.Enum):
    CURLY = "curly"
    EXTERIOR = "exterior"

    @property
    def default_cap(self) -> int:
        return DEFAULT_CURLY_CAP if self is WedgeVariant.CURLY else DEFAULT_EXTERIOR_CAP


@dataclass(frozen=True)
class WedgePresentation:
    """The full pair-generator presentation plus its bookkeeping.

    Counts are raw relator counts before reduction and deduplication.
    """

    variant: WedgeVariant
    base: FiniteGroup
    presentation: Presentation
    r1_count: int
    r2_count: int
    r3_count: int

    def pair_generator(self, m: int, n: int) -> int:
        """0-based presentation generator index of the pair (m, n)."""
        return m * self.base.order + n


def build_wedge_presentation(
    G: FiniteGroup,
    variant: WedgeVariant,
    group_cap: int | None = None,
) -> WedgePresentation:
    """Presentation on |G|^2 pair symbols with the crossed relations."""
    cap = group_cap if group_cap is not None else variant.default_cap
    if G.order > cap:
        raise GroupTooLarge(
            f"|{G.label}| = {G.order} exceeds the {variant.value} cap {cap}"
        )
    n = G.order
    mul = G.mul

    def gen(m: int, nn: int) -> int:
        return m * n + nn + 1  # 1-based presentation letter

    relators: list[tuple[int, ...]] = []
    for m in range(n):
        conj_m = [G.conj(m, t) for t in range(n)]
        for mp in range(n):
            mmp = mul[m][mp]
            cmp_ = conj_m[mp]
            for nn in range(n):
                relators.append((-gen(mmp, nn), gen(cmp_, conj_m[nn]), gen(m, nn)))
    r1 = len(relators)
    for m in range(n):
        for nn in range(n):
            conj_nn_m = G.conj(nn, m)
            row = mul[nn]
            for np_ in range(n):
                relators.append((-gen(m, row[np_]), gen(m, nn), gen(conj_nn_m, G.conj(nn, np_))))
    r2 = len(relators) - r1
    if variant is WedgeVariant.CURLY:
        for x in range(n):
            for y in range(n):
                if G.comm(x, y) == 0:
                    relators.append((gen(x, y),))
    else:
        for x in range(n):
            relators.append((gen(x, x),))
    r3 = len(relators) - r1 - r2
    pres = Presentation(
        num_generators=n * n,
        relators=preprocess_relators(relators),
        label=f"{G.label}-{variant.value}",
    )
    return WedgePresentation(
        variant=variant, base=G, presentation=pres, r1_count=r1, r2_count=r2, r3_count=r3
    )


def hom_from_generator_images(
    realization: Realization,
    target: FiniteGroup,
    gen_images: Sequence[int],
) -> GroupHom:
    """Extend generator images to the whole realized group, verifying edges.

    Every element carries a defining word; images are folded along those
    words and then every (element, generator) product is checked, which
    certifies the homomorphism property and that all relators die.
    """
    grp = realization.group
    images = []
    for w in realization.words:
        el = 0
        for ltr in w:
            x = gen_images[abs(ltr) - 1]
            if ltr < 0:
                x = target.inv[x]
            el = target.mul[el][x]
        images.append(el)
    for el in range(grp.order):
        row = grp.mul[el]
        img_el = images[el]
        for g, rg in enumerate(realization.gen_images):
            if images[row[rg]] != target.mul[img_el][gen_images[g]]:
                raise RelatorNotKilled(
                    f"generator images do not extend to a homomorphism "
                    f"(element {el}, generator {g})"
                )
    return GroupHom(grp, target, tuple(images))


@dataclass(frozen=True)
class WedgeRealization:
    """A realized pairing group with its verified commutator surjection."""

    variant: WedgeVariant
    base: FiniteGroup
    presentation: WedgePresentation
    realization: Realization
    kappa: GroupHom
    kernel: Subgroup

    def pair_image(self, m: int, n: int) -> int:
        """Element of the realized group representing the pair (m, n)."""
        return self.realization.gen_images[self.presentation.pair_generator(m, n)]

    @property
    def order(self) -> int:
        return self.realization.group.order

    def kernel_invariants(self) -> AbelianInvariants:
        return abelian_invariants(Subgroup(self.realization.group, self.kernel.members))


def compute_wedge(
    G: FiniteGroup,
    variant: WedgeVariant,
    max_cosets: int = DEFAULT_MAX_COSETS,
    group_cap: int | None = None,
    strategy: str = "hlt",
) -> WedgeRealization:
    """Realize the pairing group and extract kappa and its kernel."""
    wp = build_wedge_presentation(G, variant, group_cap)
    table = todd_coxeter(wp.presentation, (), max_cosets=max_cosets, strategy=strategy)
    real = realize(wp.presentation, table)
    n = G.order
    kappa_gen_images = [G.comm(m, nn) for m in range(n) for nn in range(n)]
    try:
        kappa = hom_from_generator_images(real, G, kappa_gen_images)
    except RelatorNotKilled as exc:
        raise KappaRelatorViolation(
            f"commutator images of {G.label} violate a pairing relator: {exc}"
        ) from exc
    derived = derived_subgroup(G)
    if set(kappa.images) != set(derived.members):
        raise KappaRelatorViolation(
            f"kappa image differs from the derived subgroup of {G.label}"
        )
    kernel_members = tuple(x for x in range(real.group.order) if kappa.images[x] == 0)
    kernel = Subgroup(real.group, kernel_members)
    if real.group.order != len(kernel_members) * len(derived):
        raise InternalCheckFailed(
            f"exactness fails for {G.label} {variant.value}: "
            f"{real.group.order} != {len(kernel_members)} * {len(derived)}"
        )
    if variant is WedgeVariant.CURLY and not kernel.is_abelian():
        raise InternalCheckFailed(f"curly kernel of {G.label} is not abelian")
    return WedgeRealization(
        variant=variant,
        base=G,
        presentation=wp,
        realization=real,
        kappa=kappa,
        kernel=kernel,
    )


def bogomolov_kernel(
    G: FiniteGroup,
    max_cosets: int = DEFAULT_MAX_COSETS,
    group_cap: int | None = None,
) -> AbelianInvariants:
    """Abelian invariants of the commutator kernel of the CURLY realization."""
    wr = compute_wedge(G, WedgeVariant.CURLY, max_cosets=max_cosets, group_cap=group_cap)
    return wr.kernel_invariants()


def multiplier_order(
    G: FiniteGroup,
    max_cosets: int = DEFAULT_MAX_COSETS,
    group_cap: int | None = None,
) -> int:
    """Order of the commutator kernel of the EXTERIOR realization."""
    wr = compute_wedge(G, WedgeVariant.EXTERIOR, max_cosets=max_cosets, group_cap=group_cap)
    return len(wr.kernel)


def check_pairing(G: FiniteGroup, L: FiniteGroup, phi: Sequence[Sequence[int]]) -> bool:
    """Exhaustively test the three pairing axioms for phi : G x G -> L."""
    n = G.order
    lmul = L.mul
    for x in range(n):
        for y in range(n):
            if G.comm(x, y) == 0 and phi[x][y] != 0:
                return False
    for m in range(n):
        conj_m = [G.conj(m, t) for t in range(n)]
        phim = phi[m]
        for mp in range(n):
            lhs_row = phi[G.mul[m][mp]]
            mid_row = phi[conj_m[mp]]
            for nn in range(n):
                if lhs_row[nn] != lmul[mid_row[conj_m[nn]]][phim[nn]]:
                    return False
    for m in range(n):
        phim = phi[m]
        for nn in range(n):
            conj_nn = [G.conj(nn, t) for t in range(n)]
            row = G.mul[nn]
            mid_row = phi[conj_nn[m]]
            for np_ in range(n):
                if phim[row[np_]] != lmul[phim[nn]][mid_row[conj_nn[np_]]]:
                    return False
    return True


def pairing_to_hom(
    G: FiniteGroup,
    L: FiniteGroup,
    phi: Sequence[Sequence[int]],
    wedge: WedgeRealization,
) -> GroupHom:
    """The unique map on the CURLY realization sending pair (m, n) to phi[m][n]."""
    if wedge.variant is not WedgeVariant.CURLY:
        raise NotAPairing("pairing extension is defined on the CURLY realization")
    if wedge.base.mul != G.mul:
        raise NotAPairing("wedge realization does not belong to this group")
    if not check_pairing(G, L, phi):
        raise NotAPairing(f"table violates a pairing axiom for {G.label}")
    n = G.order
    gen_images = [phi[m][nn] for m in range(n) for nn in range(n)]
    return hom_from_generator_images(wedge.realization, L, gen_images)


def commutator_pairing_table(G: FiniteGroup) -> list[list[int]]:
    """The commutator map as a pair table into G itself."""
    return [[G.comm(x, y) for y in range(G.order)] for x in range(G.order)]


def trace_relators_through_commutators(G: FiniteGroup, wp: WedgePresentation) -> bool:
    """Evaluate every relator with (m, n) read as [m, n] in G.

    All products must come out at the identity; this is the well-definedness
    of kappa checked directly in the base group.
    """
    n = G.order
    values = [G.comm(m, nn) for m in range(n) for nn in range(n)]
    for w in wp.presentation.relators:
        acc = 0
        for ltr in w:
            x = values[abs(ltr) - 1]
            if ltr < 0:
                x = G.inv[x]
            acc = G.mul[acc][x]
        if acc != 0:
            return False
    return True


def exterior_to_curly_surjection(
    ext: WedgeRealization, cur: WedgeRealization
) -> GroupHom:
    """The map induced by matching pair generators; total on the EXTERIOR side.

    The CURLY relator set contains the EXTERIOR one, so sending each
    exterior pair symbol to its curly image kills all exterior relators.
    """
    if ext.variant is not WedgeVariant.EXTERIOR or cur.variant is not WedgeVariant.CURLY:
        raise InternalCheckFailed("surjection runs from EXTERIOR onto CURLY")
    if ext.base.mul != cur.base.mul:
        raise InternalCheckFailed("realizations built from different base groups")
    gen_images = list(cur.realization.gen_images)
    hom = hom_from_generator_images(ext.realization, cur.realization.group, gen_images)
    if len(set(hom.images)) != cur.realization.group.order:
        raise InternalCheckFailed("exterior-to-curly map is not surjective")
    return hom
