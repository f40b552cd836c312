"""Permutation subgroups of S_n and their degree-1 (linear) characters.

Groups are built by closure from generators and kept as immutable ordered
element lists (BFS order, identity first) so characters can be stored as a
plain value array aligned with the elements.  Only linear characters are
representable; that is all the matrix-function machinery needs.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    GroupTooLarge,
    InvalidPermutation,
    NotAHomomorphism,
    NotCyclic,
    NotUnitModulus,
)

DEFAULT_GROUP_CAP = 40320  # 8!
CHARACTER_TOL = 1e-12


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0, ..., n-1}, stored as the image tuple i -> images[i]."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise InvalidPermutation(f"{self.images!r} is not a bijection on 0..{n - 1}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def from_cycles(n: int, *cycles) -> "Permutation":
        """Build from disjoint cycles, e.g. from_cycles(3, (0, 1, 2))."""
        images = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return Permutation(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self * other)(i) = self(other(i))."""
        if self.degree != other.degree:
            raise InvalidPermutation("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j] for j in other.images))

    __mul__ = compose

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def parity(self) -> int:
        """+1 for even permutations, -1 for odd."""
        seen = [False] * self.degree
        cycles = 0
        for i in range(self.degree):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = self.images[j]
        return 1 if (self.degree - cycles) % 2 == 0 else -1


class PermutationGroup:
    """An explicitly enumerated subgroup of S_n.

    Immutable after construction; the element order is fixed and is the
    order character values are stored in.
    """

    def __init__(self, degree, elements, generator_indices=(), _validated=False):
        self._degree = int(degree)
        self._elements = tuple(elements)
        self._generator_indices = tuple(generator_indices)
        self._index = {p.images: i for i, p in enumerate(self._elements)}
        self._images_array = None
        if not _validated:
            self._validate()

    def _validate(self):
        if not self._elements:
            raise InvalidPermutation("a group needs at least the identity element")
        if len(self._index) != len(self._elements):
            raise InvalidPermutation("group elements are not pairwise distinct")
        for p in self._elements:
            if p.degree != self._degree:
                raise InvalidPermutation("element degree does not match group degree")
        ident = Permutation.identity(self._degree)
        if ident.images not in self._index:
            raise InvalidPermutation("group does not contain the identity")
        for p in self._elements:
            if p.inverse().images not in self._index:
                raise InvalidPermutation(f"inverse of {p.images!r} missing from group")
            for q in self._elements:
                if (p * q).images not in self._index:
                    raise InvalidPermutation(
                        f"group not closed: {p.images!r} * {q.images!r} missing"
                    )

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def elements(self) -> tuple[Permutation, ...]:
        return self._elements

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return tuple(self._elements[i] for i in self._generator_indices)

    @property
    def generator_indices(self) -> tuple[int, ...]:
        return self._generator_indices

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def index_of(self, p: Permutation) -> int:
        return self._index[p.images]

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._index

    def images_array(self) -> np.ndarray:
        """(|G|, n) int array of element images; cached, used by evaluators."""
        if self._images_array is None:
            arr = np.array([p.images for p in self._elements], dtype=np.intp)
            arr.setflags(write=False)
            self._images_array = arr
        return self._images_array


def closure(degree: int, generators, cap: int = DEFAULT_GROUP_CAP) -> PermutationGroup:
    """Smallest subgroup of S_degree containing the generators.

    BFS from the identity, multiplying on the right by each generator in
    the given order; raises GroupTooLarge when the closure would exceed
    `cap` elements.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gens = []
    for g in generators:
        if not isinstance(g, Permutation):
            g = Permutation(tuple(g))
        if g.degree != degree:
            raise InvalidPermutation(
                f"generator degree {g.degree} does not match group degree {degree}"
            )
        gens.append(g)
    ident = Permutation.identity(degree)
    elements = [ident]
    seen = {ident.images}
    gen_indices = []
    head = 0
    while head < len(elements):
        x = elements[head]
        head += 1
        for g in gens:
            y = x * g
            if y.images not in seen:
                if len(elements) >= cap:
                    raise GroupTooLarge(f"closure exceeds cap of {cap} elements")
                seen.add(y.images)
                elements.append(y)
    for g in gens:
        idx = elements.index(g) if g.images in seen else None
        if idx is not None and idx not in gen_indices:
            gen_indices.append(idx)
    return PermutationGroup(degree, elements, gen_indices, _validated=True)


@functools.lru_cache(maxsize=None)
def symmetric_group(n: int, cap: int = DEFAULT_GROUP_CAP) -> PermutationGroup:
    """Full S_n, elements in lexicographic order (identity first)."""
    if n < 1:
        raise InvalidPermutation("degree must be >= 1")
    if math.factorial(n) > cap:
        raise GroupTooLarge(f"S_{n} has {math.factorial(n)} > {cap} elements")
    import itertools

    elements = [Permutation(p) for p in itertools.permutations(range(n))]
    gen_indices = []
    if n >= 2:
        group_index = {p.images: i for i, p in enumerate(elements)}
        swap = Permutation.from_cycles(n, (0, 1))
        cyc = Permutation.from_cycles(n, tuple(range(n)))
        for g in (cyc, swap) if n > 2 else (swap,):
            idx = group_index[g.images]
            if idx not in gen_indices:
                gen_indices.append(idx)
    return PermutationGroup(n, elements, gen_indices, _validated=True)


@functools.lru_cache(maxsize=None)
def cyclic_group(n: int) -> PermutationGroup:
    """C_n embedded in S_n, generated by the full cycle; elements are its powers."""
    if n < 1:
        raise InvalidPermutation("degree must be >= 1")
    g = Permutation.from_cycles(n, tuple(range(n)))
    elements = [Permutation.identity(n)]
    for _ in range(n - 1):
        elements.append(elements[-1] * g)
    return PermutationGroup(n, elements, (1,) if n > 1 else (), _validated=True)


@dataclass(frozen=True, eq=False)
class LinearCharacter:
    """A degree-1 character: one unit-modulus value per group element."""

    group: PermutationGroup
    values: np.ndarray  # complex128, aligned with group.elements

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, i: int) -> complex:
        return complex(self.values[i])

    def of(self, p: Permutation) -> complex:
        return complex(self.values[self.group.index_of(p)])


def sign_character(group: PermutationGroup) -> LinearCharacter:
    """chi(sigma) = parity of sigma (the determinant character)."""
    return LinearCharacter(group, np.array([p.parity() for p in group], dtype=complex))


def trivial_character(group: PermutationGroup) -> LinearCharacter:
    """chi identically 1 (the permanent character)."""
    return LinearCharacter(group, np.ones(len(group), dtype=complex))


def _designated_generator(group: PermutationGroup) -> Permutation:
    candidates = list(group.generators) or list(group.elements)
    for g in candidates:
        powers = {Permutation.identity(group.degree).images}
        x = g
        while x.images not in powers:
            powers.add(x.images)
            x = x * g
        if len(powers) == len(group):
            return g
    raise NotCyclic("no element's powers enumerate the whole group")


def cyclic_character(group: PermutationGroup, k: int) -> LinearCharacter:
    """chi(g^j) = exp(2*pi*i*j*k/m) on a cyclic group of order m.

    The designated generator is the group's stored generator if it has one,
    otherwise the first element (in group order) whose powers enumerate the
    group; raises NotCyclic when there is no such element.
    """
    g = _designated_generator(group)
    m = len(group)
    if not 0 <= k < m:
        raise ValueError(f"character index k must satisfy 0 <= k < {m}")
    values = np.empty(m, dtype=complex)
    x = Permutation.identity(group.degree)
    for j in range(m):
        values[group.index_of(x)] = cmath.exp(2j * cmath.pi * j * k / m)
        x = x * g
    return LinearCharacter(group, values)


def validate_character(group: PermutationGroup, values) -> LinearCharacter:
    """Check the linear-character invariants and return the character.

    Raises NotUnitModulus if any value is off the unit circle, and
    NotAHomomorphism (carrying the offending pair) if multiplicativity
    fails anywhere, both at tolerance 1e-12.
    """
    vals = np.asarray(values, dtype=complex)
    if vals.shape != (len(group),):
        raise NotAHomomorphism(
            f"need exactly {len(group)} values, got shape {vals.shape}"
        )
    bad = np.abs(np.abs(vals) - 1.0) > CHARACTER_TOL
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NotUnitModulus(f"|chi| != 1 at element {i}: {vals[i]!r}")
    ident_idx = group.index_of(Permutation.identity(group.degree))
    if abs(vals[ident_idx] - 1.0) > CHARACTER_TOL:
        raise NotAHomomorphism(
            f"chi(identity) = {vals[ident_idx]!r} != 1", pair=(ident_idx, ident_idx)
        )
    for i, p in enumerate(group):
        for j, q in enumerate(group):
            k = group.index_of(p * q)
            if abs(vals[i] * vals[j] - vals[k]) > CHARACTER_TOL:
                raise NotAHomomorphism(
                    f"chi({i})*chi({j}) != chi({k}) "
                    f"({vals[i] * vals[j]!r} vs {vals[k]!r})",
                    pair=(i, j),
                )
    return LinearCharacter(group, vals)


def group_to_json(group: PermutationGroup, character: LinearCharacter | None = None) -> dict:
    """Wire format: {"n": int, "elements": [[images]...], "character": [{"re","im"}...]}."""
    obj = {
        "n": group.degree,
        "elements": [list(p.images) for p in group],
    }
    if character is not None:
        obj["character"] = [
            {"re": float(v.real), "im": float(v.imag)} for v in character.values
        ]
    return obj


def group_from_json(obj: dict) -> tuple[PermutationGroup, LinearCharacter | None]:
    """Parse and fully validate a serialized group (and character, if present)."""
    degree = int(obj["n"])
    elements = [Permutation(tuple(int(i) for i in images)) for images in obj["elements"]]
    group = PermutationGroup(degree, elements)
    character = None
    if obj.get("character") is not None:
        values = [complex(v["re"], v.get("im", 0.0)) for v in obj["character"]]
        character = validate_character(group, values)
    return group, character
