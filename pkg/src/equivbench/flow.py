"""Classic structured dataflow: backward liveness and forward definite assignment.

Both analyses work directly on the statement tree (no CFG). Function bodies
are separate scopes: nothing is live after a function body, and parameters
are definitely assigned on entry.
"""

from __future__ import annotations

from .scope import read_vars
from .syntax import Assign, For, FunDef, If, Program, Return, While


class Liveness:
    """Per-statement live-after and live-before sets."""

    def __init__(self, program: Program) -> None:
        self.after: dict[int, frozenset] = {}
        self.before: dict[int, frozenset] = {}
        self._block(program.body, frozenset())

    def _block(self, stmts, out: frozenset) -> frozenset:
        live = out
        for s in reversed(stmts):
            live = self._stmt(s, live)
        return live

    def _stmt(self, s, out: frozenset) -> frozenset:
        self.after[s.sid] = out
        if isinstance(s, Assign):
            live = (out - {s.target}) | read_vars(s)
        elif isinstance(s, If):
            live = read_vars(s) | self._block(s.then, out) | self._block(s.orelse, out)
        elif isinstance(s, While):
            head = out | read_vars(s)
            while True:
                new = out | read_vars(s) | self._block(s.body, head)
                if new == head:
                    break
                head = new
            live = head
        elif isinstance(s, For):
            head = out
            while True:
                new = out | (self._block(s.body, head) - {s.var})
                if new == head:
                    break
                head = new
            live = head | read_vars(s)
        elif isinstance(s, FunDef):
            self._block(s.body, frozenset())
            live = out
        elif isinstance(s, Return):
            live = frozenset(read_vars(s))
        else:
            live = out | read_vars(s)
        live = frozenset(live)
        self.before[s.sid] = live
        return live


class DefiniteAssignment:
    """Per-statement sets of variables bound on every path reaching the statement."""

    def __init__(self, program: Program, initial=()) -> None:
        self.before: dict[int, frozenset] = {}
        self.after: dict[int, frozenset] = {}
        self._block(program.body, frozenset(initial))

    def _block(self, stmts, pre: frozenset) -> frozenset:
        for s in stmts:
            pre = self._stmt(s, pre)
        return pre

    def _stmt(self, s, pre: frozenset) -> frozenset:
        self.before[s.sid] = pre
        if isinstance(s, Assign):
            post = pre | {s.target}
        elif isinstance(s, If):
            post = self._block(s.then, pre) & self._block(s.orelse, pre)
        elif isinstance(s, While):
            self._block(s.body, pre)
            post = pre
        elif isinstance(s, For):
            self._block(s.body, pre | {s.var})
            post = pre
        elif isinstance(s, FunDef):
            self._block(s.body, frozenset(s.params))
            post = pre
        else:
            post = pre
        self.after[s.sid] = post
        return post
