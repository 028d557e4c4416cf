"""The type lattice: class, enum, function, union, refined, and variable
types, with nominal subtyping and Int-to-Float widening.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class ClassType:
    name: str
    args: tuple = ()

    def __str__(self):
        if self.args:
            return f"{self.name}<{', '.join(map(str, self.args))}>"
        return self.name


@dataclass(frozen=True)
class EnumType:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FunctionType:
    params: tuple = ()
    results: tuple = ()

    def __str__(self):
        ps = ", ".join(map(str, self.params))
        rs = ", ".join(map(str, self.results))
        return f"({ps}) -> ({rs})"


@dataclass(frozen=True)
class UnionType:
    members: tuple = ()  # flattened, deduplicated, canonically ordered

    def __str__(self):
        return f"union<{', '.join(map(str, self.members))}>"


@dataclass(frozen=True)
class RefinedType:
    base: "Type"
    constraints: tuple = ()  # of (op, constant-value) pairs

    def __str__(self):
        cs = ", ".join(f"it {op} {_render_const(v)}" for op, v in self.constraints)
        return f"{self.base} where {{{cs}}}"


@dataclass(frozen=True)
class TypeVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class _Any:
    def __str__(self):
        return "Any"


@dataclass(frozen=True)
class _Nothing:
    def __str__(self):
        return "Nothing"


ANY = _Any()
NOTHING = _Nothing()

INT = ClassType("Int")
FLOAT = ClassType("Float")
STRING = ClassType("String")
BOOLEAN = ClassType("Boolean")

BUILTIN_CLASS_NAMES = {"Int", "Float", "String", "Boolean", "List"}


def list_of(member) -> ClassType:
    return ClassType("List", (member,))


def _render_const(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return f'"{v}"'
    return repr(v) if isinstance(v, float) else str(v)


def make_union(members) -> "Type":
    """Canonical union: flattened, deduplicated, sorted; never nested."""
    flat = []
    for m in members:
        if isinstance(m, UnionType):
            flat.extend(m.members)
        else:
            flat.append(m)
    if any(isinstance(m, _Any) for m in flat):
        return ANY  # Any absorbs every other member
    seen = []
    for m in flat:
        if m not in seen and not isinstance(m, _Nothing):
            seen.append(m)
    seen.sort(key=str)
    if not seen:
        return NOTHING
    if len(seen) == 1:
        return seen[0]
    return UnionType(tuple(seen))


class ClassHierarchy:
    """Declared `sub` relationships, with type-argument substitution."""

    def __init__(self):
        self._supers: dict[str, Optional[tuple]] = {}  # name -> (params, super Type)

    def add(self, name: str, type_param_names: list, super_type: Optional["Type"]):
        self._supers[name] = (tuple(type_param_names), super_type)

    def known(self, name: str) -> bool:
        return name in self._supers

    def direct_super(self, cls: ClassType) -> Optional["Type"]:
        entry = self._supers.get(cls.name)
        if entry is None:
            return None
        param_names, sup = entry
        if sup is None:
            return None
        if param_names and len(cls.args) == len(param_names):
            binding = dict(zip(param_names, cls.args))
            return substitute(sup, binding)
        return sup


def substitute(ty, binding: dict):
    if isinstance(ty, TypeVar):
        return binding.get(ty.name, ty)
    if isinstance(ty, ClassType):
        return ClassType(ty.name, tuple(substitute(a, binding) for a in ty.args))
    if isinstance(ty, FunctionType):
        return FunctionType(tuple(substitute(p, binding) for p in ty.params),
                            tuple(substitute(r, binding) for r in ty.results))
    if isinstance(ty, UnionType):
        return make_union([substitute(m, binding) for m in ty.members])
    if isinstance(ty, RefinedType):
        return RefinedType(substitute(ty.base, binding), ty.constraints)
    return ty


_EMPTY_HIERARCHY = ClassHierarchy()


def is_subtype(a, b, hierarchy: ClassHierarchy = None) -> bool:
    """Reflexive, transitive subtype check; total on resolved types."""
    if hierarchy is None:
        hierarchy = _EMPTY_HIERARCHY
    if a == b:
        return True
    if isinstance(a, _Nothing) or isinstance(b, _Any):
        return True
    if isinstance(a, _Any) or isinstance(b, _Nothing):
        return False
    if isinstance(a, UnionType):
        return all(is_subtype(m, b, hierarchy) for m in a.members)
    if isinstance(b, UnionType):
        return any(is_subtype(a, m, hierarchy) for m in b.members)
    if isinstance(a, RefinedType):
        return is_subtype(a.base, b, hierarchy)
    if isinstance(b, RefinedType):
        return False  # only an identical refinement (caught by equality)
    if isinstance(a, FunctionType) and isinstance(b, FunctionType):
        return (
            len(a.params) == len(b.params)
            and len(a.results) == len(b.results)
            and all(is_subtype(bp, ap, hierarchy)
                    for ap, bp in zip(a.params, b.params))
            and all(is_subtype(ar, br, hierarchy)
                    for ar, br in zip(a.results, b.results))
        )
    if isinstance(a, ClassType) and isinstance(b, ClassType):
        if a.name == "Int" and b.name == "Float":
            return True  # numeric widening
        if a.name == b.name:
            return a.args == b.args  # invariant type arguments
        seen = {a.name}
        sup = hierarchy.direct_super(a)
        while isinstance(sup, ClassType) and sup.name not in seen:
            if sup.name == "Int" and b.name == "Float":
                return True
            if sup.name == b.name:
                return sup.args == b.args
            seen.add(sup.name)  # guard against declaration cycles
            sup = hierarchy.direct_super(sup)
        return False
    return False
