"""Behavior protocols: regexes over method names compiled to DFAs, and
static checking that every object's call sequence is a legal prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Diagnostic, error
from .syntax.nodes import (
    Assignment, Call, ExpressionStatement, Lambda, MemberAccess, PAlt, PAny,
    POpt, PPlus, PSeq, PStar, PToken, Reference,
)


@dataclass
class ProtocolAutomaton:
    alphabet: frozenset  # declared method names
    constrained: frozenset  # methods the regex actually talks about
    start: int
    transitions: dict  # (state, method) -> state; total over alphabet
    accepting: frozenset
    live: frozenset  # states from which an accepting state is reachable

    def step(self, state, method):
        return self.transitions[(state, method)]

    def legal_continuations(self, state):
        return sorted(m for m in self.constrained
                      if self.transitions[(state, m)] in self.live)


def protocol_tokens(regex):
    if isinstance(regex, PToken):
        yield regex.name
    elif isinstance(regex, (PSeq, PAlt)):
        for item in regex.items:
            yield from protocol_tokens(item)
    elif isinstance(regex, (PStar, PPlus, POpt)):
        yield from protocol_tokens(regex.inner)


def _contains_any(regex):
    if isinstance(regex, PAny):
        return True
    if isinstance(regex, (PSeq, PAlt)):
        return any(_contains_any(i) for i in regex.items)
    if isinstance(regex, (PStar, PPlus, POpt)):
        return _contains_any(regex.inner)
    return False


class _Nfa:
    def __init__(self):
        self.eps = []  # state -> set of states
        self.moves = []  # state -> dict sym -> set of states

    def new_state(self):
        self.eps.append(set())
        self.moves.append({})
        return len(self.eps) - 1

    def add_eps(self, a, b):
        self.eps[a].add(b)

    def add_move(self, a, sym, b):
        self.moves[a].setdefault(sym, set()).add(b)


def _build(nfa: _Nfa, regex, methods):
    """Thompson construction; returns (entry, exit)."""
    entry, exit_ = nfa.new_state(), nfa.new_state()
    if isinstance(regex, PToken):
        nfa.add_move(entry, regex.name, exit_)
    elif isinstance(regex, PAny):
        for m in methods:
            nfa.add_move(entry, m, exit_)
    elif isinstance(regex, PSeq):
        prev = entry
        for item in regex.items:
            a, b = _build(nfa, item, methods)
            nfa.add_eps(prev, a)
            prev = b
        nfa.add_eps(prev, exit_)
    elif isinstance(regex, PAlt):
        for item in regex.items:
            a, b = _build(nfa, item, methods)
            nfa.add_eps(entry, a)
            nfa.add_eps(b, exit_)
    elif isinstance(regex, PStar):
        a, b = _build(nfa, regex.inner, methods)
        nfa.add_eps(entry, a)
        nfa.add_eps(b, a)
        nfa.add_eps(entry, exit_)
        nfa.add_eps(b, exit_)
    elif isinstance(regex, PPlus):
        a, b = _build(nfa, regex.inner, methods)
        nfa.add_eps(entry, a)
        nfa.add_eps(b, a)
        nfa.add_eps(b, exit_)
    elif isinstance(regex, POpt):
        a, b = _build(nfa, regex.inner, methods)
        nfa.add_eps(entry, a)
        nfa.add_eps(b, exit_)
        nfa.add_eps(entry, exit_)
    else:
        raise TypeError(f"unknown protocol regex node {regex!r}")
    return entry, exit_


def _eps_closure(nfa: _Nfa, states):
    stack = list(states)
    closure = set(states)
    while stack:
        s = stack.pop()
        for t in nfa.eps[s]:
            if t not in closure:
                closure.add(t)
                stack.append(t)
    return frozenset(closure)


def compile_protocol(regex, methods) -> ProtocolAutomaton:
    """NFA via Thompson construction, then subset construction to a DFA
    that is total over the declared-method alphabet."""
    methods = frozenset(methods)
    constrained = frozenset(protocol_tokens(regex))
    if _contains_any(regex):
        constrained = methods
    nfa = _Nfa()
    entry, exit_ = _build(nfa, regex, sorted(methods))

    start_set = _eps_closure(nfa, {entry})
    dfa_states = {start_set: 0}
    worklist = [start_set]
    transitions = {}
    while worklist:
        current = worklist.pop()
        cid = dfa_states[current]
        for sym in sorted(methods):
            targets = set()
            for s in current:
                targets |= nfa.moves[s].get(sym, set())
            target_set = _eps_closure(nfa, targets) if targets else frozenset()
            if target_set not in dfa_states:
                dfa_states[target_set] = len(dfa_states)
                worklist.append(target_set)
            transitions[(cid, sym)] = dfa_states[target_set]
    accepting = frozenset(i for s, i in dfa_states.items() if exit_ in s)
    # live states: reverse reachability from accepting
    reverse = {}
    for (src, _sym), dst in transitions.items():
        reverse.setdefault(dst, set()).add(src)
    live = set(accepting)
    stack = list(accepting)
    while stack:
        s = stack.pop()
        for p in reverse.get(s, ()):
            if p not in live:
                live.add(p)
                stack.append(p)
    return ProtocolAutomaton(
        alphabet=methods,
        constrained=constrained,
        start=0,
        transitions=transitions,
        accepting=accepting,
        live=frozenset(live),
    )


# --- call-word extraction ---------------------------------------------------


@dataclass
class CallWord:
    object: str  # variable name, or a synthetic label for chained calls
    class_name: str  # the protocol-declaring class
    calls: list = field(default_factory=list)  # (method, span) in statement order


def _eval_order(expr):
    """Sub-expressions in evaluation order: receivers and arguments before
    the calls consuming them."""
    if isinstance(expr, Call):
        yield from _eval_order(expr.callee)
        for arg in expr.args:
            yield from _eval_order(arg.value)
        yield expr
    elif isinstance(expr, MemberAccess):
        yield from _eval_order(expr.receiver)
        yield expr
    elif isinstance(expr, Lambda):
        for stmt in expr.body:
            rhs = stmt.rhs if isinstance(stmt, Assignment) else stmt.expr
            yield from _eval_order(rhs)
    elif hasattr(expr, "elements"):  # list literal
        for e in expr.elements:
            yield from _eval_order(e)
        yield expr
    else:
        yield expr


def extract_call_words(pipeline, analysis, symbols):
    """Collect per-object method-call sequences; also reports E042 when a
    protocol object is rebound to a new name."""
    words: dict = {}
    order: list = []
    diags: list[Diagnostic] = []

    def word_for(key, class_name):
        if key not in words:
            label = key if isinstance(key, str) else f"anonymous {class_name}"
            words[key] = CallWord(label, class_name)
            order.append(key)
        return words[key]

    def protocol_class_of_expr(e):
        if isinstance(e, Reference):
            info = analysis.env.get(e.name)
            if info is None:
                return None
            cls = symbols.protocol_class_of(info.type)
            return cls.name if cls else None
        if isinstance(e, Call):
            cinfo = analysis.calls.get(id(e))
            if cinfo is not None and len(cinfo.result_types) == 1:
                cls = symbols.protocol_class_of(cinfo.result_types[0])
                return cls.name if cls else None
        return None

    def identity(e):
        if isinstance(e, Reference):
            return e.name
        return ("expr", id(e))

    for stmt in pipeline.body:
        rhs = stmt.rhs if isinstance(stmt, Assignment) else stmt.expr
        if (isinstance(stmt, Assignment) and isinstance(rhs, Reference)
                and protocol_class_of_expr(rhs) is not None):
            diags.append(error(
                "E042",
                f"protocol object '{rhs.name}' may not be rebound to a new "
                "variable", stmt.span))
            continue
        for node in _eval_order(rhs):
            if not isinstance(node, Call):
                continue
            cinfo = analysis.calls.get(id(node))
            if cinfo is None or cinfo.kind != "method":
                continue
            receiver = node.callee.receiver
            class_name = protocol_class_of_expr(receiver)
            if class_name is None:
                continue
            word = word_for(identity(receiver), class_name)
            word.calls.append((node.callee.member, node.span))
    return [words[k] for k in order], diags


def check_order(words, automata) -> list[Diagnostic]:
    """Prefix semantics: a word is legal iff it stays within live states.

    `automata` maps class name -> ProtocolAutomaton.
    """
    diags = []
    for word in words:
        auto = automata.get(word.class_name)
        if auto is None:
            continue
        state = auto.start
        for method, span in word.calls:
            if method not in auto.constrained:
                continue  # unmentioned methods are order-free
            nxt = auto.step(state, method)
            if nxt not in auto.live:
                legal = auto.legal_continuations(state)
                hint = (f"; legal next calls: {', '.join(legal)}"
                        if legal else "; no further calls are legal")
                diags.append(error(
                    "E040",
                    f"call to '{method}' on '{word.object}' violates the "
                    f"protocol of {word.class_name}{hint}", span))
                break
            state = nxt
    return diags


def build_automata(symbols) -> dict:
    """Compile every protocol-bearing class's regex once per session."""
    automata = {}
    for cls in symbols.classes.values():
        if cls.protocol is not None:
            methods = {m.name for m in cls.methods}
            automata[cls.name] = compile_protocol(cls.protocol, methods)
    return automata
