"""Resolution of referring expressions against accessible antecedents.

A referring expression can only refer to material in its current group or
in a group superordinate to it.  Both the clause structure and the
antecedent store are nested the same way; because the body of a rule is
parsed before its head while both share one store group, body material is
accessible from the head but the reverse can never happen.

During parsing a definite noun phrase or repeated proper name first lands
in the structure as temporary literals; if an accessible match exists the
variables are unified and the temporaries are removed again, otherwise the
phrase simply introduces a new entity (a definite is then treated as an
indefinite).  During generation the store built up in parallel decides
whether a definite noun phrase may be produced at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    GroupStack,
    Subst,
    TypedLiteral,
    resolve,
    unify,
)

#: The antecedent store is a GroupStack whose groups hold entity literals
#: (named / class / integer / variable) in most-recent-first order.
AntecedentStore = GroupStack


@dataclass(frozen=True)
class Mention:
    """Normalised content of one referring expression.

    ``noun`` is None for proper names; ``constant`` is None for noun
    phrases.  The apposition fields carry "the node 1" / "a node X" extras.
    """

    var: object
    noun: Optional[str] = None
    constant: Optional[str] = None
    int_app: Optional[int] = None
    var_app: Optional[str] = None

    @staticmethod
    def from_literals(literals, subst: Subst) -> "Mention":
        var = noun = constant = None
        int_app = var_app = None
        for lit in literals:
            if lit.kind == "class":
                noun = lit.symbol
                var = lit.args[0]
            elif lit.kind == "named":
                constant = lit.symbol
                var = lit.args[0]
            elif lit.kind == "integer":
                int_app = lit.symbol
            elif lit.kind == "variable":
                var_app = lit.symbol
        if var is None:
            raise ValueError("mention without a class or named literal")
        return Mention(resolve(var, subst), noun, constant, int_app, var_app)


def _group_entities(group, subst: Subst):
    """Join a store group's literals into per-entity descriptions,
    most recent first."""
    order = []
    desc: dict = {}
    for lit in group:
        v = resolve(lit.args[0], subst)
        key = id(v) if not isinstance(v, (str, int)) else v
        if key not in desc:
            desc[key] = {"var": v, "lits": []}
            order.append(key)
        desc[key]["lits"].append(lit)
    return [desc[k] for k in order]


def _entity_matches(entity, mention: Mention, subst: Subst, same_var: bool) -> bool:
    noun = constant = None
    int_app = var_app = None
    for lit in entity["lits"]:
        if lit.kind == "class":
            noun = lit.symbol
        elif lit.kind == "named":
            constant = lit.symbol
        elif lit.kind == "integer":
            int_app = lit.symbol
        elif lit.kind == "variable":
            var_app = lit.symbol
    if mention.constant is not None:
        if constant != mention.constant:
            return False
    else:
        if noun != mention.noun:
            return False
        if mention.int_app is not None and int_app != mention.int_app:
            return False
        if mention.var_app is not None and var_app != mention.var_app:
            return False
    if same_var:
        a, b = resolve(entity["var"], subst), resolve(mention.var, subst)
        return a is b or a == b
    return True


def find_antecedent(mention: Mention, store: AntecedentStore, subst: Subst,
                    same_var: bool = False):
    """The closest accessible entity matching the mention, or None.

    Groups are searched innermost first and within each group most recent
    first, so with two candidates the one added last always wins and a
    parse re-run is bit-identical.
    """
    for group in store.iter_groups():
        for entity in _group_entities(group, subst):
            if _entity_matches(entity, mention, subst, same_var):
                return entity
    return None


def resolve_definite(temp_literals, cl_with_temps: GroupStack,
                     store: AntecedentStore, subst: Subst):
    """Anaphora step for a definite noun phrase just parsed.

    ``temp_literals`` are the literals the noun phrase pushed (they sit at
    the front of ``cl_with_temps``).  On a match the mention's variable is
    unified with the antecedent's and the temporaries are removed; without
    an antecedent the definite is treated as an indefinite and the new
    entity is recorded in the store.

    Returns (cl, store, subst).
    """
    mention = Mention.from_literals(temp_literals, subst)
    antecedent = find_antecedent(mention, store, subst)
    if antecedent is not None:
        s2 = unify(mention.var, antecedent["var"], subst)
        if s2 is not None:
            return cl_with_temps.consume(len(temp_literals)), store, s2
    store2 = store.push_all(temp_literals)
    return cl_with_temps, store2, subst


def resolve_proper_name(literal: TypedLiteral, cl_with_temp: GroupStack,
                        store: AntecedentStore, subst: Subst):
    """Anaphora step for a proper name just parsed (same contract as
    resolve_definite, with the single named literal as temporary)."""
    return resolve_definite((literal,), cl_with_temp, store, subst)


def may_generate_definite(literal_group, store: AntecedentStore, subst: Subst) -> bool:
    """Generation-side check: may these noun-phrase literals be realised as
    a definite noun phrase?

    True iff an accessible antecedent describes the same entity: unlike the
    parsing direction the variables must already coincide, because during
    generation re-mentions share their variable with the first mention.
    """
    mention = Mention.from_literals(literal_group, subst)
    return find_antecedent(mention, store, subst, same_var=True) is not None


def record_mention(literal_group, store: AntecedentStore) -> AntecedentStore:
    """Add a first mention's literals to the store."""
    return store.push_all(literal_group)
