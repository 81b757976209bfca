"""Persistent singly-linked lists.

Machine environments, stacks, vectors and tables are all cons lists: the
capture rules snapshot whole sequences on every context switch, so O(1) cons
with spine sharing is what keeps runs (and the lock-step checkers, which
memoize by spine identity) linear instead of quadratic.
"""

from __future__ import annotations

from typing import Any, Iterable, Iterator


class PList:
    """Immutable cons list. The empty list is the module-level singleton NIL."""

    __slots__ = ("head", "tail", "_len")

    head: Any
    tail: "PList"
    _len: int

    def __init__(self, head: Any, tail: "PList"):
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "_len", tail._len + 1)

    def __setattr__(self, name: str, value: Any):
        raise AttributeError("PList is immutable")

    def cons(self, item: Any) -> "PList":
        return PList(item, self)

    def __len__(self) -> int:
        return self._len

    def __bool__(self) -> bool:
        return self._len > 0

    def __iter__(self) -> Iterator[Any]:
        node = self
        while node._len > 0:
            yield node.head
            node = node.tail

    def __getitem__(self, index: int) -> Any:
        if index < 0 or index >= self._len:
            raise IndexError(f"plist index {index} out of range (length {self._len})")
        node = self
        for _ in range(index):
            node = node.tail
        return node.head

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, PList):
            return NotImplemented
        if self._len != other._len:
            return False
        a, b = self, other
        while a._len > 0:
            if a is b:
                return True
            if a.head != b.head:
                return False
            a, b = a.tail, b.tail
        return True

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return "plist([" + ", ".join(repr(x) for x in self) + "])"


# The empty list: a self-consistent sentinel cell of length 0.
NIL = PList.__new__(PList)
object.__setattr__(NIL, "head", None)
object.__setattr__(NIL, "tail", NIL)
object.__setattr__(NIL, "_len", 0)


def plist(items: Iterable[Any] = ()) -> PList:
    """Build a PList with the same order as the iterable (head = first item)."""
    out = NIL
    for item in reversed(list(items)):
        out = out.cons(item)
    return out
