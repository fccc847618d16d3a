"""Random program sampling and grammar-validity masks over string prefixes.

The mask side is a deterministic character automaton over the same rigid
surface language the parser accepts. States are immutable values; a state is
only ever constructed if some completion of its prefix is a valid program, so
``allowed_chars`` is exact rather than an over-approximation. Tracked
left-to-right constraints: the joint-name trie (aliases included), per-motion
channel uniqueness, t1 < t2 <= T via digit-bounded comparison, |target| <= 1,
and the bounded fraction length.

Token masking is character-level: a vocabulary token is admissible when
consuming it character by character keeps the automaton alive. The empty
string acts as the end-of-text pseudo-token and is admissible exactly in
accepting states.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Sequence

from .core import (DEFAULT_REGISTRY, Horizon, JointAxisChannel, MotionProgram,
                   MotionSpec, Registry, SensorTarget, as_horizon,
                   channel_from_index)
from .errors import ConfigError, ExactError

EOF_TOKEN = ""

_GAP_PROBABILITY = 0.25  # chance of shifting a window start off the previous cut

_DIGITS = frozenset("0123456789")


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SamplerConfig:
    """Knobs for random program generation; infeasible settings raise early."""

    seed: int
    motions_range: tuple[int, int] = (1, 4)
    sensors_range: tuple[int, int] = (1, 3)
    horizon: Horizon = Horizon()
    target_decimals: int = 4

    def __post_init__(self):
        object.__setattr__(self, "horizon", as_horizon(self.horizon))
        mlo, mhi = self.motions_range
        slo, shi = self.sensors_range
        if not 1 <= mlo <= mhi:
            raise ConfigError(f"bad motions_range {self.motions_range}")
        if not 1 <= slo <= shi:
            raise ConfigError(f"bad sensors_range {self.sensors_range}")
        if shi > DEFAULT_REGISTRY.num_channels:
            raise ConfigError(
                f"sensors_range upper bound {shi} exceeds {DEFAULT_REGISTRY.num_channels} channels")
        if self.horizon.T < 2:
            raise ConfigError("horizon must be at least 2")
        if mhi > self.horizon.T:
            raise ConfigError(f"cannot fit {mhi} motions into horizon {self.horizon.T}")
        if not 0 <= self.target_decimals <= 4:
            raise ConfigError("target_decimals must be in [0, 4]")


def sample_program(config: SamplerConfig) -> MotionProgram:
    """Draw one valid program, deterministically per seed.

    The horizon prefix [0, c_k] is split at k random cuts into consecutive
    windows; each window start may then be shifted forward to open a gap.
    Channels are distinct within a motion; targets are uniform on the
    fixed-point grid of [-1, 1] at the configured resolution.
    """
    rng = random.Random(config.seed)
    T = config.horizon.T
    k = rng.randint(*config.motions_range)
    cuts = sorted(rng.sample(range(1, T + 1), k))
    step = 10 ** (4 - config.target_decimals)
    grid = 10 ** config.target_decimals
    motions = []
    prev = 0
    for cut in cuts:
        start, end = prev, cut
        prev = cut
        if end - start >= 2 and rng.random() < _GAP_PROBABILITY:
            start += rng.randint(1, end - start - 1)
        n_sensors = rng.randint(*config.sensors_range)
        channels = rng.sample(range(DEFAULT_REGISTRY.num_channels), n_sensors)
        sensors = tuple(
            SensorTarget(channel_from_index(c), rng.randint(-grid, grid) * step)
            for c in channels)
        motions.append(MotionSpec(start, end, sensors))
    return MotionProgram(tuple(motions))


# ---------------------------------------------------------------------------
# prefix automaton


class _Phase(IntEnum):
    START = 0        # expecting '[' of a motion
    T1 = 1           # reading the window start
    T2 = 2           # reading the window end
    NAME = 3         # walking the joint-name trie
    AXIS = 4         # expecting an axis letter
    LPAREN = 5       # expecting '('
    TGT_START = 6    # expecting '-' or the integer digit of a target
    TGT_SIGNED = 7   # '-' consumed
    TGT_INT = 8      # integer digit consumed
    TGT_FRAC = 9     # '.' consumed, reading fraction digits
    SENSOR_END = 10  # sensor complete; accepting


class _Trie:
    """Joint-name trie over canonical names and aliases."""

    def __init__(self, registry: Registry):
        self.children: list[dict[str, int]] = [{}]
        self.terminal: list[int | None] = [None]
        names: list[tuple[str, int]] = []
        for j in registry.joints:
            names.append((j.name, j.ordinal))
            for a in j.aliases:
                names.append((a, j.ordinal))
        for name, ordinal in names:
            node = 0
            for ch in name:
                nxt = self.children[node].get(ch)
                if nxt is None:
                    nxt = len(self.children)
                    self.children[node][ch] = nxt
                    self.children.append({})
                    self.terminal.append(None)
                node = nxt
            self.terminal[node] = ordinal
        self.reachable: list[frozenset[int]] = [frozenset()] * len(self.children)
        self._fill_reachable(0)

    def _fill_reachable(self, node: int) -> frozenset[int]:
        acc = set()
        if self.terminal[node] is not None:
            acc.add(self.terminal[node])
        for child in self.children[node].values():
            acc |= self._fill_reachable(child)
        self.reachable[node] = frozenset(acc)
        return self.reachable[node]


class GrammarContext:
    """Shared immutable data for one grammar instance (registry, bounds, trie)."""

    def __init__(self, horizon: Horizon | int | None = None,
                 registry: Registry = DEFAULT_REGISTRY, max_decimals: int = 4):
        if not 1 <= max_decimals <= 4:
            raise ConfigError("max_decimals must be in [1, 4]")
        self.registry = registry
        self.T = as_horizon(horizon).T
        self.max_decimals = max_decimals
        self.trie = _Trie(registry)
        self.full_mask = (1 << registry.num_channels) - 1


class DeadEndError(ExactError):
    """Raised when a character leaves no valid completion."""

    def __init__(self, char: str, admissible: frozenset[str]):
        self.char = char
        self.admissible = admissible
        shown = "".join(sorted(admissible)) or "<end of text>"
        super().__init__(f"character {char!r} leads to a dead state; admissible: {shown!r}")


@dataclass(frozen=True)
class PrefixState:
    """Automaton state after consuming some prefix; live by construction."""

    ctx: GrammarContext
    phase: _Phase
    t1: int | None = None
    t2: int | None = None
    node: int = 0
    joint: int | None = None
    int_digit: int | None = None
    frac_len: int = 0
    used: int = 0


def initial_state(horizon: Horizon | int | None = None,
                  registry: Registry = DEFAULT_REGISTRY,
                  max_decimals: int = 4) -> PrefixState:
    return PrefixState(GrammarContext(horizon, registry, max_decimals), _Phase.START)


def _t2_can_reach(v: int, t1: int, T: int) -> bool:
    """True when some digit extension of the literal v lands in (t1, T]."""
    if v == 0:
        return False  # leading zero: '0' is final and never exceeds t1 >= 0
    scale = 1
    while v * scale <= T:
        lo = v * scale
        hi = min(lo + scale - 1, T)
        if hi > t1:
            return True
        scale *= 10
    return False


def _free_axes(used: int, joint: int) -> tuple[int, ...]:
    return tuple(a for a in range(3) if not used >> (joint * 3 + a) & 1)


def _node_live(state: PrefixState, node: int) -> bool:
    return any(_free_axes(state.used, j) for j in state.ctx.trie.reachable[node])


def allowed_chars(state: PrefixState) -> frozenset[str]:
    """Exact set of characters that keep the automaton live."""
    ctx, ph = state.ctx, state.phase
    out: set[str] = set()
    if ph is _Phase.START:
        out.add("[")
    elif ph is _Phase.T1:
        if state.t1 is None:
            out.update(str(d) for d in range(10) if d <= ctx.T - 1)
        else:
            out.add(",")
            if state.t1 > 0:
                out.update(str(d) for d in range(10) if state.t1 * 10 + d <= ctx.T - 1)
    elif ph is _Phase.T2:
        if state.t2 is not None:
            if state.t1 < state.t2 <= ctx.T:
                out.add("]")
            if state.t2 > 0:
                out.update(str(d) for d in range(10)
                           if _t2_can_reach(state.t2 * 10 + d, state.t1, ctx.T))
        else:
            out.update(str(d) for d in range(10) if _t2_can_reach(d, state.t1, ctx.T))
    elif ph is _Phase.NAME:
        trie = ctx.trie
        for ch, child in trie.children[state.node].items():
            if _node_live(state, child):
                out.add(ch)
        term = trie.terminal[state.node]
        if term is not None and _free_axes(state.used, term):
            out.add(".")
    elif ph is _Phase.AXIS:
        out.update("xyz"[a] for a in _free_axes(state.used, state.joint))
    elif ph is _Phase.LPAREN:
        out.add("(")
    elif ph is _Phase.TGT_START:
        out.update(("-", "0", "1"))
    elif ph is _Phase.TGT_SIGNED:
        out.update(("0", "1"))
    elif ph is _Phase.TGT_INT:
        out.add(")")
        if ctx.max_decimals >= 1:
            out.add(".")
    elif ph is _Phase.TGT_FRAC:
        if state.frac_len >= 1:
            out.add(")")
        if state.frac_len < ctx.max_decimals:
            out.update("0" if state.int_digit == 1 else "0123456789")
    elif ph is _Phase.SENSOR_END:
        out.add(";")
        if state.used != ctx.full_mask:
            out.add(" ")
    return frozenset(out)


def is_accepting(state: PrefixState) -> bool:
    return state.phase is _Phase.SENSOR_END


def advance(state: PrefixState, ch: str) -> PrefixState:
    """Consume one character; raises :class:`DeadEndError` if no valid
    program can complete the extended prefix."""
    ok = allowed_chars(state)
    if ch not in ok:
        raise DeadEndError(ch, ok)
    ph = state.phase
    if ph is _Phase.START:
        return replace(state, phase=_Phase.T1, t1=None)
    if ph is _Phase.T1:
        if ch == ",":
            return replace(state, phase=_Phase.T2, t2=None)
        return replace(state, t1=(state.t1 or 0) * 10 + int(ch))
    if ph is _Phase.T2:
        if ch == "]":
            return replace(state, phase=_Phase.NAME, node=0, used=0)
        return replace(state, t2=(state.t2 or 0) * 10 + int(ch))
    if ph is _Phase.NAME:
        if ch == ".":
            return replace(state, phase=_Phase.AXIS, joint=state.ctx.trie.terminal[state.node])
        return replace(state, node=state.ctx.trie.children[state.node][ch])
    if ph is _Phase.AXIS:
        bit = state.joint * 3 + "xyz".index(ch)
        return replace(state, phase=_Phase.LPAREN, used=state.used | 1 << bit)
    if ph is _Phase.LPAREN:
        return replace(state, phase=_Phase.TGT_START, int_digit=None, frac_len=0)
    if ph is _Phase.TGT_START:
        if ch == "-":
            return replace(state, phase=_Phase.TGT_SIGNED)
        return replace(state, phase=_Phase.TGT_INT, int_digit=int(ch))
    if ph is _Phase.TGT_SIGNED:
        return replace(state, phase=_Phase.TGT_INT, int_digit=int(ch))
    if ph is _Phase.TGT_INT:
        if ch == ")":
            return replace(state, phase=_Phase.SENSOR_END)
        return replace(state, phase=_Phase.TGT_FRAC, frac_len=0)
    if ph is _Phase.TGT_FRAC:
        if ch == ")":
            return replace(state, phase=_Phase.SENSOR_END)
        return replace(state, frac_len=state.frac_len + 1)
    # SENSOR_END
    if ch == ";":
        return replace(state, phase=_Phase.START, t1=None, t2=None, used=0)
    return replace(state, phase=_Phase.NAME, node=0)


def try_advance(state: PrefixState, ch: str) -> PrefixState | None:
    if ch in allowed_chars(state):
        return advance(state, ch)
    return None


def advance_text(state: PrefixState, text: str) -> PrefixState:
    """Consume a whole string; DeadEndError reports the failing position."""
    for i, ch in enumerate(text):
        nxt = try_advance(state, ch)
        if nxt is None:
            raise DeadEndError(ch, allowed_chars(state)) from None
        state = nxt
    return state


def accepts(text: str, horizon: Horizon | int | None = None,
            registry: Registry = DEFAULT_REGISTRY, max_decimals: int = 4) -> bool:
    state = initial_state(horizon, registry, max_decimals)
    for ch in text:
        state = try_advance(state, ch)
        if state is None:
            return False
    return is_accepting(state)


def allowed_tokens(state: PrefixState, vocab: Sequence[str]) -> list[bool]:
    """Boolean mask over a token vocabulary.

    A token is admissible when consuming its characters keeps the automaton
    live. The empty string is the end-of-text pseudo-token, admissible exactly
    when the current prefix is a complete program.
    """
    mask = []
    for token in vocab:
        if token == EOF_TOKEN:
            mask.append(is_accepting(state))
            continue
        cur: PrefixState | None = state
        for ch in token:
            cur = try_advance(cur, ch)
            if cur is None:
                break
        mask.append(cur is not None)
    return mask
