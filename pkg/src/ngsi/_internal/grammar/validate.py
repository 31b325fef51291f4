from __future__ import annotations

from dataclasses import dataclass

from .symbols import Grammar, Nonterminal


@dataclass(frozen=True, slots=True)
class GrammarDefect:
    kind: str  # "unreachable" | "nonproductive" | "duplicate"
    message: str
    nonterminal: str
    rule_label: str | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def _reachable(g: Grammar) -> set[int]:
    seen = {g.start.id}
    stack = [g.start]
    while stack:
        nt = stack.pop()
        for rule in g.rules_for(nt):
            for child in rule.nonterminals:
                if child.id not in seen:
                    seen.add(child.id)
                    stack.append(child)
    return seen


def _productive(g: Grammar) -> set[int]:
    productive: set[int] = set()
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if rule.lhs.id in productive:
                continue
            if all(child.id in productive for child in rule.nonterminals):
                productive.add(rule.lhs.id)
                changed = True
    return productive


def validate_grammar(g: Grammar) -> list[GrammarDefect]:
    """Report structural defects; an empty list means the grammar is usable.

    Defects are data: nothing here raises.
    """
    defects: list[GrammarDefect] = []

    reachable = _reachable(g)
    productive = _productive(g)

    nt: Nonterminal
    for nt in g.nonterminals:
        if nt.id not in reachable:
            defects.append(
                GrammarDefect("unreachable", f"{nt.name} is not reachable from {g.start.name}", nt.name)
            )
        if nt.id not in productive:
            reason = "has no rules" if not g.rules_for(nt) else "derives no terminal string"
            defects.append(GrammarDefect("nonproductive", f"{nt.name} {reason}", nt.name))

    for nt in g.nonterminals:
        seen: dict[tuple[str, ...], str] = {}
        for rule in g.rules_for(nt):
            key = tuple(
                f"N:{s.name}" if isinstance(s, Nonterminal) else f"T:{s.text}" for s in rule.rhs
            )
            first = seen.get(key)
            if first is not None:
                defects.append(
                    GrammarDefect(
                        "duplicate",
                        f"{rule.label} repeats the rhs of {first} under {nt.name}",
                        nt.name,
                        rule_label=rule.label,
                    )
                )
            else:
                seen[key] = rule.label

    return defects
