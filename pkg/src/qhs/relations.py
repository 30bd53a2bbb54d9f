"""Relation systems presenting the homogeneous spaces, and their verification.

A Relation states sum_{i,j} T[i,j] x_{i_1}^{e_1}..x_{i_l}^{e_l}
(x_{j_1}^{f_1}..x_{j_k}^{f_k})^* = rhs, with the exponents read off the two
colored words.  Three generators ship: max-form (rows of the Haar
projection), med-form (one relation per selected invariant vector), and
hom-form (vectors pushed through Frobenius duality into operators).
Verification evaluates relations exactly on an oracle realization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exact import (
    DomainError,
    ExactMatrix,
    IncompatibleOracleError,
    ScaledScalar,
    flat_index,
    multi_indices,
    rank,
)
from .frobenius import frobenius_to_hom
from .oracle import GroupDualData, OracleGroup, OracleRealization
from .partitions import COLORS, CategorySpec, WHITE, check_word, conjugate_word
from .weingarten import IndexSet, gram_weingarten, projection_P


@dataclass(frozen=True)
class Relation:
    """One two-sided relation; coefficients has shape N^l x N^k for the
    left (plain) and right (starred) words."""

    left_word: str
    right_word: str
    coefficients: ExactMatrix
    rhs: ScaledScalar

    def recompute_rhs(self, I: IndexSet) -> ScaledScalar:
        """rhs = m**(-(k+l)/2) * sum of coefficients over I^l x I^k."""
        l, k = len(self.left_word), len(self.right_word)
        n = I.N
        cols = self.coefficients.cols
        total = Fraction(0)
        for b in product(I.sorted_members, repeat=l):
            base = flat_index(b, n) * cols
            for c in product(I.sorted_members, repeat=k):
                total += self.coefficients.entries[base + flat_index(c, n)]
        return ScaledScalar(total, k + l, I.m)

    def to_json(self) -> dict:
        return {
            "left_word": self.left_word,
            "right_word": self.right_word,
            "T": self.coefficients.to_string_rows(),
            "rhs": self.rhs.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Relation":
        return cls(
            check_word(data["left_word"]),
            check_word(data["right_word"]),
            ExactMatrix.from_string_rows(data["T"]),
            ScaledScalar.from_json(data["rhs"]),
        )


@dataclass(frozen=True)
class RelationSystem:
    spec: CategorySpec
    I: IndexSet
    provenance: str  # max-form | med-form | hom-form
    relations: tuple

    def to_json(self) -> dict:
        return {
            "spec": str(self.spec),
            "I": [i + 1 for i in self.I.sorted_members],
            "provenance": self.provenance,
            "relations": [rel.to_json() for rel in self.relations],
        }


def _generator_words(spec: CategorySpec, max_len: int) -> list:
    """Words of length 1..max_len; one all-white representative per length
    for the self-conjugate families, every coloring for the U families."""
    out = []
    for length in range(1, max_len + 1):
        if spec.self_conjugate:
            out.append(WHITE * length)
        else:
            out.extend("".join(w) for w in product(COLORS, repeat=length))
    return out


def _trivial_relation(I: IndexSet) -> Relation:
    return Relation("", "", ExactMatrix(1, 1, (1,)), ScaledScalar(Fraction(1), 0, I.m))


def _check_I(spec: CategorySpec, I: IndexSet):
    if I.N != spec.N:
        raise DomainError(f"index set over N={I.N} does not match spec N={spec.N}")


def relations_med(spec: CategorySpec, I: IndexSet, max_k: int = 4) -> RelationSystem:
    """One relation per selected invariant vector per word."""
    _check_I(spec, I)
    rels = []
    if max_k == 0:
        rels.append(_trivial_relation(I))
    for word in _generator_words(spec, max_k):
        data = gram_weingarten(spec, word)
        k = len(word)
        for _part, vec in data.basis.selected:
            T = ExactMatrix(spec.N**k, 1, vec.entries)
            q = sum(
                vec.entries[flat_index(b, spec.N)]
                for b in product(I.sorted_members, repeat=k)
            )
            rels.append(Relation(word, "", T, ScaledScalar(Fraction(q), k, I.m)))
    return RelationSystem(spec, I, "med-form", tuple(rels))


def relations_max(spec: CategorySpec, I: IndexSet, max_k: int = 4) -> RelationSystem:
    """One relation per row of the Haar projection per word."""
    _check_I(spec, I)
    rels = []
    if max_k == 0:
        rels.append(_trivial_relation(I))
    for word in _generator_words(spec, max_k):
        P = projection_P(spec, word)
        k = len(word)
        i_flats = [
            flat_index(b, spec.N) for b in product(I.sorted_members, repeat=k)
        ]
        for r in range(P.rows):
            row = P.row(r)
            T = ExactMatrix(P.cols, 1, row)
            q = sum((row[j] for j in i_flats), Fraction(0))
            rels.append(Relation(word, "", T, ScaledScalar(q, k, I.m)))
    return RelationSystem(spec, I, "max-form", tuple(rels))


def relations_hom(
    spec: CategorySpec, I: IndexSet, max_k: int = 4, max_l: int = 2
) -> RelationSystem:
    """Two-sided relations from the invariant vectors of l + conjugate(k),
    pushed through Frobenius duality."""
    _check_I(spec, I)
    rels = []
    if max_k == 0 and max_l == 0:
        rels.append(_trivial_relation(I))
    l_words = {0: [""]}
    k_words = {0: [""]}
    for lw in _generator_words(spec, max_l):
        l_words.setdefault(len(lw), []).append(lw)
    for kw in _generator_words(spec, max_k):
        k_words.setdefault(len(kw), []).append(kw)
    n = spec.N
    for total in range(1, max_k + max_l + 1):
        for l_len in range(0, min(total, max_l) + 1):
            k_len = total - l_len
            if k_len > max_k:
                continue
            for lw in l_words.get(l_len, []):
                for kw in k_words.get(k_len, []):
                    fix_word = lw + conjugate_word(kw)
                    data = gram_weingarten(spec, fix_word)
                    for _part, vec in data.basis.selected:
                        T = frobenius_to_hom(vec, kw, lw, n)
                        rel = Relation(lw, kw, T, ScaledScalar(Fraction(1), 0, I.m))
                        rels.append(Relation(lw, kw, T, rel.recompute_rhs(I)))
    return RelationSystem(spec, I, "hom-form", tuple(rels))


def _decoded_nonzeros(T: ExactMatrix, n: int, l: int, k: int) -> list:
    """(row tuple, col tuple, value) for the nonzero coefficients."""
    rows_dec = list(multi_indices(n, l))
    cols_dec = list(multi_indices(n, k))
    out = []
    for r, dr in enumerate(rows_dec):
        base = r * T.cols
        for c, dc in enumerate(cols_dec):
            val = T.entries[base + c]
            if val:
                out.append((dr, dc, val))
    return out


def _apply_monomial(form, entries, n: int, k: int):
    """Push a tensor through g tensor ... tensor g for a monomial g."""
    rows, vals = form
    out = [0] * len(entries)
    for flat, idx in enumerate(multi_indices(n, k)):
        val = entries[flat]
        if val:
            sign = 1
            for t in idx:
                sign *= vals[t]
            out[flat_index((rows[t] for t in idx), n)] = sign * val
    return out


def _check_compatible(system: RelationSystem, real: OracleRealization):
    """The oracle must fix every category basis vector used by the system.

    Checked exactly at all word lengths for monomial classical oracles and
    for duals; truncated to length <= 2 for generic rational matrix groups.
    """
    spec = system.spec
    if real.N != spec.N:
        raise IncompatibleOracleError(
            f"oracle N={real.N} does not match spec N={spec.N}"
        )
    words = sorted(
        {rel.left_word + conjugate_word(rel.right_word) for rel in system.relations},
        key=lambda w: (len(w), w),
    )
    source = real.source
    monomial = isinstance(source, OracleGroup) and source.monomial_forms() is not None
    for word in words:
        if isinstance(source, OracleGroup) and not monomial and len(word) > 2:
            continue
        data = gram_weingarten(spec, word)
        n = spec.N
        k = len(word)
        for _part, vec in data.basis.selected:
            if isinstance(source, OracleGroup):
                for form in source.monomial_forms() or []:
                    if _apply_monomial(form, vec.entries, n, k) != list(vec.entries):
                        raise IncompatibleOracleError(
                            f"oracle does not fix the category vectors at word {word!r}"
                        )
                if not monomial:
                    for g in source.elements:
                        moved = _apply_dense(g, vec.entries, n, k)
                        if moved != list(vec.entries):
                            raise IncompatibleOracleError(
                                f"oracle does not fix the category vectors at word {word!r}"
                            )
            else:
                for flat, idx in enumerate(multi_indices(n, k)):
                    if vec.entries[flat] and source.word_value(word, idx) != source.identity:
                        raise IncompatibleOracleError(
                            f"dual oracle does not fix the category vectors at word {word!r}"
                        )


def _apply_dense(g: ExactMatrix, entries, n: int, k: int):
    out = [0] * len(entries)
    for flat_i, i in enumerate(multi_indices(n, k)):
        acc = 0
        for flat_j, j in enumerate(multi_indices(n, k)):
            val = entries[flat_j]
            if val:
                coeff = 1
                for a, b in zip(i, j):
                    coeff *= g.at(a, b)
                    if coeff == 0:
                        break
                if coeff:
                    acc += coeff * val
        out[flat_i] = acc
    return out


def _verify_classical(rel: Relation, real: OracleRealization):
    n = real.N
    l, k = len(rel.left_word), len(rel.right_word)
    nz = _decoded_nonzeros(rel.coefficients, n, l, k)
    rhs_q = rel.rhs.rescale(k + l)
    coords = real.source.coordinate_table(real.I)
    for gi, c in enumerate(coords):
        acc = Fraction(0)
        for dr, dc, val in nz:
            term = val
            dead = False
            for t in dr:
                ct = c[t]
                if ct == 0:
                    dead = True
                    break
                term = term * ct
            if dead:
                continue
            for t in dc:
                ct = c[t]
                if ct == 0:
                    dead = True
                    break
                term = term * ct
            if not dead:
                acc += term
        if acc != rhs_q:
            return False, {"element": gi, "lhs_scaled": str(acc), "rhs_scaled": str(rhs_q)}
    return True, None


def _verify_dual(rel: Relation, real: OracleRealization):
    dual: GroupDualData = real.source
    I = real.I
    n = real.N
    l, k = len(rel.left_word), len(rel.right_word)
    cols = rel.coefficients.cols
    rhs_q = rel.rhs.rescale(k + l)
    buckets = {}
    for b in product(I.sorted_members, repeat=l):
        base = flat_index(b, n) * cols
        left = dual.word_value(rel.left_word, b)
        for c in product(I.sorted_members, repeat=k):
            val = rel.coefficients.entries[base + flat_index(c, n)]
            if val:
                gamma = dual.multiply(
                    left, dual.invert(dual.word_value(rel.right_word, c))
                )
                buckets[gamma] = buckets.get(gamma, 0) + val
    for gamma, coeff in buckets.items():
        expected = rhs_q if gamma == dual.identity else 0
        if coeff != expected:
            return False, {
                "group_element": dual.index[gamma],
                "lhs_scaled": str(coeff),
                "rhs_scaled": str(expected),
            }
    if dual.identity not in buckets and rhs_q != 0:
        return False, {
            "group_element": dual.index[dual.identity],
            "lhs_scaled": "0",
            "rhs_scaled": str(rhs_q),
        }
    return True, None


def verify_relations(system: RelationSystem, real: OracleRealization) -> dict:
    """Evaluate every relation exactly on the realization.

    Classical: the scalar identity must hold at every group element.  Dual:
    the operator identity must hold in the regular representation.  Reports
    pass/fail per relation with a witness for the first failure.
    """
    if system.I.sorted_members != real.I.sorted_members or system.I.N != real.I.N:
        raise IncompatibleOracleError("relation system and realization use different index sets")
    _check_compatible(system, real)
    verify_one = _verify_classical if real.classical else _verify_dual
    entries = []
    all_passed = True
    for pos, rel in enumerate(system.relations):
        passed, witness = verify_one(rel, real)
        all_passed &= passed
        entry = {
            "index": pos,
            "left_word": rel.left_word,
            "right_word": rel.right_word,
            "passed": passed,
        }
        if witness is not None:
            entry["witness"] = witness
        entries.append(entry)
    return {
        "spec": str(system.spec),
        "I": str(system.I),
        "provenance": system.provenance,
        "oracle": getattr(real.source, "name", "oracle"),
        "passed": all_passed,
        "relations": entries,
    }


def med_spans_max(spec: CategorySpec, I: IndexSet, max_k: int = 3) -> dict:
    """Exact rank test: per word, stacking the max-form rows onto the
    med-form rows must not increase the rank."""
    med = relations_med(spec, I, max_k)
    mx = relations_max(spec, I, max_k)
    report = {"spec": str(spec), "I": str(I), "words": [], "passed": True}
    words = sorted(
        {rel.left_word for rel in med.relations} | {rel.left_word for rel in mx.relations},
        key=lambda w: (len(w), w),
    )
    for word in words:
        med_rows = [
            list(rel.coefficients.entries)
            for rel in med.relations
            if rel.left_word == word
        ]
        max_rows = [
            list(rel.coefficients.entries)
            for rel in mx.relations
            if rel.left_word == word
        ]
        width = spec.N ** len(word)
        base = ExactMatrix.from_rows(med_rows) if med_rows else ExactMatrix.zeros(0, width)
        stacked = ExactMatrix.from_rows(med_rows + max_rows)
        r_med = rank(base)
        r_all = rank(stacked)
        contained = r_med == r_all
        report["words"].append(
            {"word": word, "rank_med": r_med, "rank_stacked": r_all, "contained": contained}
        )
        report["passed"] &= contained
    return report


def parse_relation_system(data: dict) -> RelationSystem:
    spec = CategorySpec.parse(data["spec"])
    I = IndexSet.of(spec.N, [i - 1 for i in data["I"]])
    return RelationSystem(
        spec,
        I,
        data["provenance"],
        tuple(Relation.from_json(rel) for rel in data["relations"]),
    )
