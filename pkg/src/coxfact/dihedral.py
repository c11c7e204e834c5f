"""The infinite dihedral group acting on the integers.

``t(n)`` is the reflection of the real line across the point ``n``.  Hurwitz
moves on a triple ``(t(a), t(b), t(c))`` act on the integers directly:

* ``sigma_1``: ``(a, b) -> (b, 2b - a)``
* ``sigma_1^-1``: ``(a, b) -> (2a - b, a)``

and likewise on the second pair.  The surjection onto ``I2(m)`` sends ``t(n)``
to the reflection across line ``n mod m`` of the angle model in
:mod:`coxfact.rootsys`.
"""

from __future__ import annotations

from dataclasses import dataclass

MoveTrace = list  # signed generator indices: +i for sigma_i, -i for its inverse


def conj(a: int, b: int) -> int:
    """``t(b)`` conjugated by ``t(a)``: reflect ``b`` across ``a``."""
    return 2 * a - b


def spread(t: tuple[int, ...]) -> int:
    return max(t) - min(t)


def apply_move(t: tuple[int, ...], move: int) -> tuple[int, ...]:
    i = abs(move) - 1
    if not 0 <= i < len(t) - 1:
        raise IndexError(f"move {move} out of range for length {len(t)}")
    a, b = t[i], t[i + 1]
    pair = (b, conj(b, a)) if move > 0 else (conj(a, b), a)
    return t[:i] + pair + t[i + 2:]


def replay(t: tuple[int, ...], trace: list[int]) -> tuple[int, ...]:
    for mv in trace:
        t = apply_move(t, mv)
    return t


def product_offset(t: tuple[int, ...]) -> tuple[int, int]:
    """The product ``t(a1) t(a2) ... t(ak)`` as ``x -> sgn*x + shift``.

    ``t(a)`` is ``x -> 2a - x``; factors act rightmost first.
    """
    sgn, shift = 1, 0
    for a in reversed(t):
        # compose t(a) after the current map
        sgn, shift = -sgn, 2 * a - shift
    return sgn, shift


# the symmetries of a triple and how a move transforms under them:
# reversal maps sigma_j^e to sigma_{3-j}^{-e}; negation leaves moves unchanged
_TRANSFORMS = ("id", "rev", "neg", "revneg")


def _transform(t: tuple[int, int, int], name: str) -> tuple[int, int, int]:
    if "rev" in name:
        t = t[::-1]
    if "neg" in name:
        t = tuple(-x for x in t)
    return t


def _pull_move(move: int, name: str) -> int:
    if "rev" in name:
        return -(3 - abs(move)) if move > 0 else (3 - abs(move))
    return move


@dataclass
class ReductionStep:
    triple: tuple[int, int, int]
    move: int | None  # the move that produced this triple
    reflecting: bool  # True for a reflection across the median


def reduce_triple(t: tuple[int, int, int]) -> tuple[tuple[int, int, int], MoveTrace, list[ReductionStep]]:
    """Reach a triple with two equal entries by reflecting across the median.

    Returns the final triple, the move trace, and the intermediate triples.
    """
    t = tuple(int(x) for x in t)
    if len(t) != 3:
        raise ValueError("need a triple")
    trace: list[int] = []
    steps: list[ReductionStep] = [ReductionStep(t, None, False)]
    guard = 4 * (spread(t) + 2)
    while len(set(t)) == 3:
        guard -= 1
        if guard < 0:
            raise RuntimeError(f"triple reduction did not terminate from {steps[0].triple}")
        sorted_case = None
        for name in _TRANSFORMS:
            a, b, c = _transform(t, name)
            if a <= b <= c:
                sorted_case = name
                break
        if sorted_case is not None:
            a, b, c = _transform(t, sorted_case)
            # prefer the left gap on ties
            move = 1 if b - a <= c - b else -2
            reflecting = True
        else:
            for name in _TRANSFORMS:
                a, b, c = _transform(t, name)
                if a <= c < b:
                    break
            else:  # pragma: no cover - every distinct triple falls in one case
                raise AssertionError(t)
            sorted_case = name
            move = -1
            reflecting = False
        real = _pull_move(move, sorted_case)
        t = apply_move(t, real)
        trace.append(real)
        steps.append(ReductionStep(t, real, reflecting))
    return t, trace, steps


def project(n: int, m: int) -> int:
    """Line index in ``I2(m)`` of the image of ``t(n)``."""
    if m < 3:
        raise ValueError("m must be at least 3")
    return n % m


def format_reduction(steps: list[ReductionStep]) -> str:
    def name(mv: int) -> str:
        return f"s{abs(mv)}" + ("^-1" if mv < 0 else "")

    out = []
    for st in steps:
        a, b, c = st.triple
        prefix = "   " if st.move is None else f"-> {name(st.move)}: "
        out.append(f"{prefix}({a}, {b}, {c})  M={spread(st.triple)}")
    return "\n".join(out) + "\n"
