"""Colored words, set partitions, and the six partition categories.

Words are strings over 'o' (white, exponent 1) and 'b' (black, exponent *).
Partitions live on 0-based points internally; the textual literal (blocks of
1-based digits separated by '|', e.g. ``12|34``) is the CLI/test interface.
Enumeration is in restricted-growth-string lexicographic order, which fixes
every basis ordering downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache, cached_property
from itertools import combinations, product

from .exact import DomainError, ExactTensor, ParseError, flat_index, _exact_div

WHITE = "o"
BLACK = "b"
COLORS = WHITE + BLACK

FAMILIES = ("S", "O", "U", "S+", "O+", "U+")
# u = ubar for these, so colors are invisible to the category.
SELF_CONJUGATE_FAMILIES = frozenset({"S", "O", "S+", "O+"})


def check_word(word: str) -> str:
    if any(ch not in COLORS for ch in word):
        raise ParseError(f"word must be over '{WHITE}'/'{BLACK}', got {word!r}")
    return word


def conjugate_word(word: str) -> str:
    """Reverse the word and flip every color."""
    return "".join(WHITE if ch == BLACK else BLACK for ch in reversed(word))


@dataclass(frozen=True)
class CategorySpec:
    """One of the six categories S, O, U, S+, O+, U+ at a fixed size N."""

    family: str
    N: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParseError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.N < 1:
            raise ParseError(f"N must be positive, got {self.N}")

    @property
    def self_conjugate(self) -> bool:
        return self.family in SELF_CONJUGATE_FAMILIES

    def __str__(self):
        return f"{self.family}({self.N})"

    @classmethod
    def parse(cls, text: str) -> "CategorySpec":
        text = text.strip()
        if not (text.endswith(")") and "(" in text):
            raise ParseError(f"bad category spec {text!r}; expected e.g. S(4) or O+(3)")
        family, arg = text[:-1].split("(", 1)
        try:
            n = int(arg)
        except ValueError as exc:
            raise ParseError(f"bad size in category spec {text!r}") from exc
        return cls(family, n)


@dataclass(frozen=True)
class SetPartition:
    """Partition of {0..k-1}; blocks sorted internally and by least element."""

    point_count: int
    blocks: tuple

    def __post_init__(self):
        seen = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if tuple(sorted(block)) != tuple(block):
                raise ValueError("block not sorted")
            seen.update(block)
        if seen != set(range(self.point_count)):
            raise ValueError("blocks do not cover the point set")
        if sum(len(b) for b in self.blocks) != self.point_count:
            raise ValueError("blocks overlap")
        if list(self.blocks) != sorted(self.blocks, key=lambda b: b[0]):
            raise ValueError("blocks not in canonical order")

    @classmethod
    def from_blocks(cls, point_count: int, blocks) -> "SetPartition":
        canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        return cls(point_count, canon)

    @cached_property
    def block_index(self) -> tuple:
        """block_index[p] is the position of the block containing point p."""
        out = [0] * self.point_count
        for i, block in enumerate(self.blocks):
            for p in block:
                out[p] = i
        return tuple(out)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def is_noncrossing(self) -> bool:
        bi = self.block_index
        for a, b, c, d in combinations(range(self.point_count), 4):
            if bi[a] == bi[c] and bi[b] == bi[d] and bi[a] != bi[b]:
                return False
        return True

    def join(self, other: "SetPartition") -> "SetPartition":
        """Finest partition coarser than both (transitive closure of the union)."""
        if other.point_count != self.point_count:
            raise DomainError("point count mismatch in join")
        parent = list(range(self.point_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for part in (self, other):
            for block in part.blocks:
                root = find(block[0])
                for p in block[1:]:
                    parent[find(p)] = root
        groups = {}
        for p in range(self.point_count):
            groups.setdefault(find(p), []).append(p)
        return SetPartition.from_blocks(self.point_count, groups.values())

    def refines(self, other: "SetPartition") -> bool:
        """True when every block of self sits inside a block of other."""
        bi = other.block_index
        return all(len({bi[p] for p in block}) == 1 for block in self.blocks)

    def __str__(self):
        return format_partition(self)


def format_partition(part: SetPartition) -> str:
    if part.point_count > 9:
        raise ValueError("digit literal only defined for at most 9 points")
    return "|".join("".join(str(p + 1) for p in block) for block in part.blocks)


def parse_partition(text: str) -> SetPartition:
    text = text.strip()
    if not text:
        return SetPartition(0, ())
    blocks = []
    for chunk in text.split("|"):
        if not chunk.isdigit():
            raise ParseError(f"bad partition literal {text!r}")
        blocks.append([int(ch) - 1 for ch in chunk])
    points = sorted(p for b in blocks for p in b)
    if points != list(range(len(points))):
        raise ParseError(f"partition literal {text!r} does not cover 1..k")
    return SetPartition.from_blocks(len(points), blocks)


@cache
def all_partitions(k: int) -> tuple:
    """All partitions of k points, restricted-growth-string lexicographic."""
    if k == 0:
        return (SetPartition(0, ()),)
    result = []

    def extend(rgs, top):
        if len(rgs) == k:
            blocks = [[] for _ in range(top + 1)]
            for p, label in enumerate(rgs):
                blocks[label].append(p)
            result.append(SetPartition.from_blocks(k, blocks))
            return
        for v in range(top + 2):
            rgs.append(v)
            extend(rgs, max(top, v))
            rgs.pop()

    extend([0], 0)
    return tuple(result)


@cache
def all_pairings(k: int) -> tuple:
    return tuple(p for p in all_partitions(k) if p.is_pairing())


def _color_matched(part: SetPartition, word: str) -> bool:
    return all(word[a] != word[b] for a, b in part.blocks)


def enumerate_category(spec: CategorySpec, word: str) -> list:
    """The category's partitions for a colored word, in canonical order.

    S: all partitions; O: all pairings; U: pairings joining opposite colors;
    the '+' families keep only the noncrossing ones.  An odd-length word in
    a pairing family yields the empty list.
    """
    check_word(word)
    k = len(word)
    family = spec.family
    if family == "S":
        parts = all_partitions(k)
    elif family == "S+":
        parts = tuple(p for p in all_partitions(k) if p.is_noncrossing())
    elif family == "O":
        parts = all_pairings(k)
    elif family == "O+":
        parts = tuple(p for p in all_pairings(k) if p.is_noncrossing())
    elif family == "U":
        parts = tuple(p for p in all_pairings(k) if _color_matched(p, word))
    else:  # U+
        parts = tuple(
            p for p in all_pairings(k) if p.is_noncrossing() and _color_matched(p, word)
        )
    return list(parts)


def partition_vector(part: SetPartition, n: int) -> ExactTensor:
    """The 0/1 tensor supported on multi-indices constant on each block."""
    k = part.point_count
    entries = [0] * (n**k)
    block_list = part.blocks
    for assignment in product(range(n), repeat=len(block_list)):
        idx = [0] * k
        for value, block in zip(assignment, block_list):
            for p in block:
                idx[p] = value
        entries[flat_index(idx, n)] = 1
    return ExactTensor((n,) * k, entries)


@dataclass(frozen=True)
class FixBasis:
    """Partition vectors spanning an invariant-vector space, with a selected
    linearly independent sublist (same span)."""

    word: str
    N: int
    members: tuple  # ((SetPartition, ExactTensor), ...)
    independent: tuple  # indices into members

    @property
    def selected(self) -> tuple:
        return tuple(self.members[i] for i in self.independent)

    @property
    def dimension(self) -> int:
        return len(self.independent)


def select_basis(members, n: int, word: str = "") -> FixBasis:
    """Greedy scan in canonical order, keeping a vector iff it raises the rank."""
    echelon = []  # (pivot position, reduced row), sorted by pivot
    keep = []
    for t, (_part, vec) in enumerate(members):
        row = list(vec.entries)
        for pivot, erow in echelon:
            x = row[pivot]
            if x:
                f = _exact_div(x, erow[pivot])
                row = [a - f * b if b else a for a, b in zip(row, erow)]
        lead = next((i for i, x in enumerate(row) if x != 0), None)
        if lead is None:
            continue
        keep.append(t)
        echelon.append((lead, row))
        echelon.sort(key=lambda pair: pair[0])
    return FixBasis(word, n, tuple(members), tuple(keep))


def fix_basis(spec: CategorySpec, word: str) -> FixBasis:
    """Enumerate the category, build the partition vectors, select a basis."""
    parts = enumerate_category(spec, word)
    members = [(p, partition_vector(p, spec.N)) for p in parts]
    return select_basis(members, spec.N, word)
