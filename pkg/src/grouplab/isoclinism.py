"""Isoclinism of finite groups, with explicit replayable witnesses.

Two groups are isoclinic when some isomorphism of their central quotients
and some isomorphism of their derived subgroups intertwine the commutator
maps. The search backtracks over central-quotient isomorphisms and derives
the derived-subgroup map from each candidate: the compatibility condition
pins it down on commutator values, and any failure of single-valuedness,
multiplicativity or bijectivity rejects the candidate.

A verified witness induces an isomorphism between the CURLY pairing
realizations of the two groups; building it, checking the commuting-square
identity against both commutator surjections, and fuzzing the choice of
coset representatives are all explicit operations here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    InternalCheckFailed,
    PairingAxiomFailed,
    ValidationError,
    WitnessInvalid,
)
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    center,
    derived_subgroup,
    isomorphisms_iter,
    quotient,
)
from .wedge import WedgeRealization, WedgeVariant, check_pairing, hom_from_generator_images


@dataclass(frozen=True)
class IsoclinismWitness:
    """The pair of intertwining isomorphisms plus the data to replay them.

    ``alpha`` maps central-quotient indices; ``beta`` lists (element of the
    first derived subgroup, element of the second) pairs in parent labels;
    the sections pick one representative element per central coset.
    """

    source: FiniteGroup
    target: FiniteGroup
    quotient1: FiniteGroup
    quotient2: FiniteGroup
    proj1: GroupHom
    proj2: GroupHom
    alpha: GroupHom
    beta: tuple[tuple[int, int], ...]
    section1: tuple[int, ...]
    section2: tuple[int, ...]

    def beta_dict(self) -> dict[int, int]:
        return dict(self.beta)

    def lift(self, x: int) -> int:
        """Section representative in the target over the image coset of x."""
        return self.section2[self.alpha.images[self.proj1.images[x]]]

    def beta_hom(self) -> GroupHom:
        """beta as a homomorphism between the derived subgroups as groups."""
        d1 = Subgroup(self.source, tuple(sorted(x for x, _ in self.beta)))
        d2 = Subgroup(self.target, tuple(sorted(y for _, y in self.beta)))
        g1, members1 = d1.as_group()
        g2, members2 = d2.as_group()
        pos2 = {x: i for i, x in enumerate(members2)}
        bmap = self.beta_dict()
        images = tuple(pos2[bmap[x]] for x in members1)
        return GroupHom(g1, g2, images)


def _central_data(G: FiniteGroup) -> tuple[FiniteGroup, GroupHom, Subgroup]:
    Z = center(G)
    Q, proj = quotient(G, Z)
    return Q, proj, Z


def _minimal_section(G: FiniteGroup, proj: GroupHom, Q: FiniteGroup) -> tuple[int, ...]:
    sec = [-1] * Q.order
    for x in range(G.order):
        q = proj.images[x]
        if sec[q] < 0:
            sec[q] = x
    return tuple(sec)


def _derive_beta(
    G1: FiniteGroup,
    G2: FiniteGroup,
    lift: Sequence[int],
    derived2: Subgroup,
) -> dict[int, int] | None:
    """Map forced on commutators by compatibility, extended to the closure.

    Returns the full map on the first derived subgroup, or None when the
    candidate quotient isomorphism admits no compatible derived-subgroup
    isomorphism.
    """
    n1 = G1.order
    beta: dict[int, int] = {}
    for x in range(n1):
        lx = lift[x]
        for y in range(n1):
            c1 = G1.comm(x, y)
            c2 = G2.comm(lx, lift[y])
            prev = beta.get(c1)
            if prev is None:
                beta[c1] = c2
            elif prev != c2:
                return None
    generators = sorted(beta)
    known = dict(beta)
    queue = sorted(known)
    while queue:
        a = queue.pop(0)
        ka = known[a]
        for b in generators:
            ab = G1.mul[a][b]
            img = G2.mul[ka][known[b]]
            prev = known.get(ab)
            if prev is None:
                known[ab] = img
                queue.append(ab)
            elif prev != img:
                return None
    if len(set(known.values())) != len(known):
        return None
    if set(known.values()) != set(derived2.members):
        return None
    members = sorted(known)
    for a in members:
        for b in members:
            if known[G1.mul[a][b]] != G2.mul[known[a]][known[b]]:
                return None
    return known


def are_isoclinic(G1: FiniteGroup, G2: FiniteGroup) -> IsoclinismWitness | None:
    """First witness in deterministic search order, or None."""
    Q1, proj1, _ = _central_data(G1)
    Q2, proj2, _ = _central_data(G2)
    if Q1.order != Q2.order:
        return None
    D1 = derived_subgroup(G1)
    D2 = derived_subgroup(G2)
    if len(D1) != len(D2):
        return None
    if Q1.order_multiset() != Q2.order_multiset():
        return None
    sec1 = _minimal_section(G1, proj1, Q1)
    sec2 = _minimal_section(G2, proj2, Q2)
    for alpha in isomorphisms_iter(Q1, Q2):
        lift = [sec2[alpha.images[proj1.images[x]]] for x in range(G1.order)]
        beta = _derive_beta(G1, G2, lift, D2)
        if beta is None:
            continue
        return IsoclinismWitness(
            source=G1,
            target=G2,
            quotient1=Q1,
            quotient2=Q2,
            proj1=proj1,
            proj2=proj2,
            alpha=alpha,
            beta=tuple(sorted(beta.items())),
            section1=sec1,
            section2=sec2,
        )
    return None


def verify_witness(w: IsoclinismWitness) -> bool:
    """Re-check everything, over all pairs and all representative choices."""
    if not (w.alpha.is_homomorphism() and w.alpha.is_bijective()):
        return False
    beta_hom = w.beta_hom()
    if not (beta_hom.is_homomorphism() and beta_hom.is_bijective()):
        return False
    G1, G2 = w.source, w.target
    D1 = derived_subgroup(G1)
    if set(x for x, _ in w.beta) != set(D1.members):
        return False
    if set(y for _, y in w.beta) != set(derived_subgroup(G2).members):
        return False
    # projections and sections must be coherent
    for q in range(w.quotient1.order):
        if w.proj1.images[w.section1[q]] != q:
            return False
    for q in range(w.quotient2.order):
        if w.proj2.images[w.section2[q]] != q:
            return False
    bmap = w.beta_dict()
    cosets2: list[list[int]] = [[] for _ in range(w.quotient2.order)]
    for x in range(G2.order):
        cosets2[w.proj2.images[x]].append(x)
    for a1 in range(G1.order):
        qa = w.alpha.images[w.proj1.images[a1]]
        for b1 in range(G1.order):
            qb = w.alpha.images[w.proj1.images[b1]]
            expected = bmap[G1.comm(a1, b1)]
            for a2 in cosets2[qa]:
                for b2 in cosets2[qb]:
                    if G2.comm(a2, b2) != expected:
                        return False
    return True


def identity_witness(G: FiniteGroup) -> IsoclinismWitness:
    Q, proj, _ = _central_data(G)
    D = derived_subgroup(G)
    sec = _minimal_section(G, proj, Q)
    return IsoclinismWitness(
        source=G,
        target=G,
        quotient1=Q,
        quotient2=Q,
        proj1=proj,
        proj2=proj,
        alpha=GroupHom(Q, Q, tuple(range(Q.order))),
        beta=tuple((x, x) for x in sorted(D.members)),
        section1=sec,
        section2=sec,
    )


def invert_witness(w: IsoclinismWitness) -> IsoclinismWitness:
    return IsoclinismWitness(
        source=w.target,
        target=w.source,
        quotient1=w.quotient2,
        quotient2=w.quotient1,
        proj1=w.proj2,
        proj2=w.proj1,
        alpha=w.alpha.inverse(),
        beta=tuple(sorted((y, x) for x, y in w.beta)),
        section1=w.section2,
        section2=w.section1,
    )


def compose_witnesses(w12: IsoclinismWitness, w23: IsoclinismWitness) -> IsoclinismWitness:
    if w12.target.mul != w23.source.mul:
        raise WitnessInvalid("witnesses do not share the middle group")
    if w12.quotient2.mul != w23.quotient1.mul:
        raise WitnessInvalid("middle central quotients disagree")
    b12 = w12.beta_dict()
    b23 = w23.beta_dict()
    return IsoclinismWitness(
        source=w12.source,
        target=w23.target,
        quotient1=w12.quotient1,
        quotient2=w23.quotient2,
        proj1=w12.proj1,
        proj2=w23.proj2,
        alpha=w23.alpha.compose(w12.alpha),
        beta=tuple(sorted((x, b23[y]) for x, y in b12.items())),
        section1=w12.section1,
        section2=w23.section2,
    )


@dataclass(frozen=True)
class GammaMap:
    """The isomorphism between CURLY realizations induced by a witness."""

    witness: IsoclinismWitness
    gamma: GroupHom
    gamma_tilde: GroupHom
    kernel1_members: tuple[int, ...]
    kernel2_members: tuple[int, ...]


def _pair_table(
    w: IsoclinismWitness, wedge2: WedgeRealization, section2: Sequence[int]
) -> list[list[int]]:
    G1 = w.source
    n1 = G1.order
    lift = [section2[w.alpha.images[w.proj1.images[x]]] for x in range(n1)]
    return [[wedge2.pair_image(lift[a], lift[b]) for b in range(n1)] for a in range(n1)]


def build_gamma(
    w: IsoclinismWitness,
    wedge1: WedgeRealization,
    wedge2: WedgeRealization,
) -> GammaMap:
    """Construct, verify and package the induced map and its kernel part."""
    if wedge1.variant is not WedgeVariant.CURLY or wedge2.variant is not WedgeVariant.CURLY:
        raise ValidationError("gamma is built between CURLY realizations")
    if wedge1.base.mul != w.source.mul or wedge2.base.mul != w.target.mul:
        raise ValidationError("wedge realizations do not match the witness groups")
    if not verify_witness(w):
        raise WitnessInvalid("witness failed re-verification")
    G1 = w.source
    phi = _pair_table(w, wedge2, w.section2)
    if not check_pairing(G1, wedge2.realization.group, phi):
        raise PairingAxiomFailed("induced pair table violates a pairing axiom")
    n1 = G1.order
    gen_images = [phi[a][b] for a in range(n1) for b in range(n1)]
    gamma = hom_from_generator_images(
        wedge1.realization, wedge2.realization.group, gen_images
    )
    if not gamma.is_bijective():
        raise InternalCheckFailed("induced map between realizations is not bijective")
    # commuting square: beta after kappa1 equals kappa2 after gamma
    bmap = w.beta_dict()
    k1, k2 = wedge1.kappa.images, wedge2.kappa.images
    for el in range(wedge1.realization.group.order):
        if bmap[k1[el]] != k2[gamma.images[el]]:
            raise InternalCheckFailed("commuting square fails at a realization element")
    ker1 = tuple(sorted(wedge1.kernel.members))
    ker2 = tuple(sorted(wedge2.kernel.members))
    ker2_set = set(ker2)
    for x in ker1:
        if gamma.images[x] not in ker2_set:
            raise InternalCheckFailed("gamma does not restrict to the kernels")
    k1_group, members1 = Subgroup(wedge1.realization.group, ker1).as_group()
    k2_group, members2 = Subgroup(wedge2.realization.group, ker2).as_group()
    pos2 = {x: i for i, x in enumerate(members2)}
    tilde_images = tuple(pos2[gamma.images[x]] for x in members1)
    gamma_tilde = GroupHom(k1_group, k2_group, tilde_images)
    if not (gamma_tilde.is_homomorphism() and gamma_tilde.is_bijective()):
        raise InternalCheckFailed("kernel restriction is not an isomorphism")
    return GammaMap(
        witness=w,
        gamma=gamma,
        gamma_tilde=gamma_tilde,
        kernel1_members=ker1,
        kernel2_members=ker2,
    )


def well_definedness_fuzz(
    w: IsoclinismWitness,
    wedge1: WedgeRealization,
    wedge2: WedgeRealization,
    trials: int = 100,
    seed: int = 0,
) -> bool:
    """Perturb coset representatives by central elements; gamma must not move."""
    G2 = w.target
    Z2 = sorted(center(G2).members)
    baseline = _pair_table(w, wedge2, w.section2)
    rng = random.Random(seed)
    for _ in range(trials):
        perturbed = tuple(
            G2.mul[rep][rng.choice(Z2)] for rep in w.section2
        )
        table = _pair_table(w, wedge2, perturbed)
        if table != baseline:
            return False
    return True


def _signature(G: FiniteGroup) -> tuple:
    Q, _, _ = _central_data(G)
    D = derived_subgroup(G)
    dg, _ = D.as_group()
    return (Q.order, len(D), Q.order_multiset(), dg.order_multiset())


def partition_into_families(catalog: Sequence[FiniteGroup]) -> list[list[int]]:
    """Partition catalog indices into isoclinism families.

    Pairwise searches are pruned by cheap invariants of the central quotient
    and derived subgroup; the union-find merge order is deterministic.
    """
    n = len(catalog)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    sigs = [_signature(G) for G in catalog]
    for i in range(n):
        for j in range(i + 1, n):
            if sigs[i] != sigs[j]:
                continue
            ri, rj = find(i), find(j)
            if ri == rj:
                continue
            if are_isoclinic(catalog[i], catalog[j]) is not None:
                parent[max(ri, rj)] = min(ri, rj)
    families: dict[int, list[int]] = {}
    for i in range(n):
        families.setdefault(find(i), []).append(i)
    return [sorted(members) for _, members in sorted(families.items())]


def witness_to_json(w: IsoclinismWitness) -> dict:
    return {
        "schema_version": 1,
        "source": w.source.label,
        "target": w.target.label,
        "alpha": list(w.alpha.images),
        "beta": [list(pair) for pair in w.beta],
        "section": {"source": list(w.section1), "target": list(w.section2)},
    }
