from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from ...exceptions import GrammarError
from ..fingerprint import fingerprint64


@dataclass(frozen=True, slots=True)
class Nonterminal:
    id: int
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Token:
    """A terminal symbol; `id` indexes the grammar vocabulary."""

    id: int
    text: str

    def __str__(self) -> str:
        return self.text


Symbol = Union[Token, Nonterminal]


@dataclass(frozen=True, slots=True)
class ProductionRule:
    """One rule `lhs -> rhs`.

    `label` is the textual rule id used by every file format (S1, A1, C10, ...);
    `id` is the dense numeric index in table order.
    """

    id: int
    label: str
    lhs: Nonterminal
    rhs: tuple[Symbol, ...]

    @property
    def nonterminals(self) -> tuple[Nonterminal, ...]:
        return tuple(s for s in self.rhs if isinstance(s, Nonterminal))

    @property
    def terminals(self) -> tuple[Token, ...]:
        return tuple(s for s in self.rhs if isinstance(s, Token))

    @property
    def arity(self) -> int:
        return sum(1 for s in self.rhs if isinstance(s, Nonterminal))

    def is_chain(self) -> bool:
        return len(self.rhs) == 1 and isinstance(self.rhs[0], Nonterminal)

    def describe(self) -> str:
        return f"{self.lhs.name} -> {' '.join(str(s) for s in self.rhs)}"


RuleSpec = tuple[str, str, Sequence[str]]


@dataclass(frozen=True)
class Grammar:
    """Immutable context-free grammar with dense ids for every symbol kind."""

    nonterminals: tuple[Nonterminal, ...]
    vocabulary: tuple[Token, ...]
    rules: tuple[ProductionRule, ...]
    start: Nonterminal

    _by_lhs: tuple[tuple[ProductionRule, ...], ...] = field(init=False, repr=False, compare=False)
    _label_index: dict[str, ProductionRule] = field(init=False, repr=False, compare=False)
    _nt_index: dict[str, Nonterminal] = field(init=False, repr=False, compare=False)
    _token_index: dict[str, Token] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for i, nt in enumerate(self.nonterminals):
            if nt.id != i:
                raise GrammarError(f"Nonterminal ids must be dense; {nt.name} has id {nt.id}, expected {i}")
        for i, tok in enumerate(self.vocabulary):
            if tok.id != i:
                raise GrammarError(f"Token ids must be dense; {tok.text!r} has id {tok.id}, expected {i}")
        for i, rule in enumerate(self.rules):
            if rule.id != i:
                raise GrammarError(f"Rule ids must be dense; {rule.label} has id {rule.id}, expected {i}")

        by_lhs: list[list[ProductionRule]] = [[] for _ in self.nonterminals]
        for rule in self.rules:
            by_lhs[rule.lhs.id].append(rule)

        object.__setattr__(self, "_by_lhs", tuple(tuple(rs) for rs in by_lhs))
        object.__setattr__(self, "_label_index", {r.label: r for r in self.rules})
        object.__setattr__(self, "_nt_index", {nt.name: nt for nt in self.nonterminals})
        object.__setattr__(self, "_token_index", {t.text: t for t in self.vocabulary})

    @classmethod
    def build(cls, nonterminal_names: Sequence[str], rule_specs: Iterable[RuleSpec], *, start: str) -> "Grammar":
        """Build a grammar from `(label, lhs, rhs symbols)` triples.

        A rhs symbol naming a nonterminal is a nonterminal; anything else is a
        terminal. Terminals receive ids in order of first appearance. Structural
        defects (unreachable or rule-less nonterminals, duplicates) are allowed
        here and reported by `validate_grammar`.
        """
        if len(set(nonterminal_names)) != len(nonterminal_names):
            raise GrammarError("Nonterminal names must be unique")

        nts = tuple(Nonterminal(id=i, name=n) for i, n in enumerate(nonterminal_names))
        nt_by_name = {nt.name: nt for nt in nts}
        if start not in nt_by_name:
            raise GrammarError(f"Unknown start symbol {start!r}")

        vocab: dict[str, Token] = {}
        rules: list[ProductionRule] = []
        labels: set[str] = set()

        for label, lhs_name, rhs_names in rule_specs:
            if label in labels:
                raise GrammarError(f"Duplicate rule label {label!r}")
            labels.add(label)

            lhs = nt_by_name.get(lhs_name)
            if lhs is None:
                raise GrammarError(f"Rule {label}: unknown lhs {lhs_name!r}")
            if not rhs_names:
                raise GrammarError(f"Rule {label}: rhs must be nonempty")

            rhs: list[Symbol] = []
            for name in rhs_names:
                if name in nt_by_name:
                    rhs.append(nt_by_name[name])
                    continue
                tok = vocab.get(name)
                if tok is None:
                    tok = Token(id=len(vocab), text=name)
                    vocab[name] = tok
                rhs.append(tok)

            rules.append(ProductionRule(id=len(rules), label=label, lhs=lhs, rhs=tuple(rhs)))

        return cls(
            nonterminals=nts,
            vocabulary=tuple(vocab.values()),
            rules=tuple(rules),
            start=nt_by_name[start],
        )

    # --- Lookup ---

    def nonterminal(self, key: Nonterminal | int | str) -> Nonterminal:
        if isinstance(key, Nonterminal):
            if 0 <= key.id < len(self.nonterminals) and self.nonterminals[key.id] == key:
                return key
            raise GrammarError(f"Nonterminal {key.name!r} does not belong to this grammar")
        if isinstance(key, str):
            nt = self._nt_index.get(key)
            if nt is None:
                raise GrammarError(f"Unknown nonterminal {key!r}")
            return nt
        if isinstance(key, int) and not isinstance(key, bool) and 0 <= key < len(self.nonterminals):
            return self.nonterminals[key]
        raise GrammarError(f"Unknown nonterminal id {key!r}")

    def rules_for(self, nt: Nonterminal | int | str) -> tuple[ProductionRule, ...]:
        """Rules whose lhs is `nt`, in rule-id order."""
        return self._by_lhs[self.nonterminal(nt).id]

    def rule_by_id(self, rule_id: int) -> ProductionRule:
        if not (0 <= rule_id < len(self.rules)):
            raise GrammarError(f"Unknown rule id {rule_id}")
        return self.rules[rule_id]

    def rule_by_label(self, label: str) -> ProductionRule:
        rule = self._label_index.get(label)
        if rule is None:
            raise GrammarError(f"Unknown rule label {label!r}")
        return rule

    def token(self, text: str) -> Token:
        tok = self._token_index.get(text)
        if tok is None:
            raise GrammarError(f"Unknown terminal {text!r}")
        return tok

    def token_id(self, text: str) -> int | None:
        tok = self._token_index.get(text)
        return None if tok is None else tok.id

    # --- Fingerprints ---

    def fingerprint(self) -> int:
        """64-bit fingerprint of the rule table (labels, lhs, rhs, order)."""
        return fingerprint64(f"{r.label}\t{r.describe()}" for r in self.rules)

    def vocab_fingerprint(self) -> int:
        return fingerprint64(t.text for t in self.vocabulary)
