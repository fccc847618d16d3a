"""Core domain types: joint registry, channels, sensor targets, motion programs.

Programs address the body through 23 named joints, three axes each, giving 69
scalar position channels. Targets are stored as 4-decimal fixed-point integers
so that printing and parsing round-trip exactly on every platform.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import ProgramError, RegistryError

TARGET_SCALE = 10_000  # fixed-point denominator, 4 decimal digits

AXES = ("x", "y", "z")


class Side(Enum):
    LEFT = "Left"
    RIGHT = "Right"
    CENTER = "Center"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class JointInfo:
    """One row of the joint registry."""

    name: str
    ordinal: int
    side: Side
    base: str  # name with the side prefix stripped; used for side-blind matching
    aliases: tuple[str, ...] = ()
    print_alias: str | None = None  # preferred surface spelling, if any


# SMPL body joints in kinematic-tree order, root excluded. "LArm"/"RArm" are
# accepted (and printed) as aliases for the shoulders.
_JOINT_NAMES = (
    "LHip", "RHip", "Spine1", "LKnee", "RKnee", "Spine2", "LAnkle", "RAnkle",
    "Spine3", "LFoot", "RFoot", "Neck", "LCollar", "RCollar", "Head",
    "LShoulder", "RShoulder", "LElbow", "RElbow", "LWrist", "RWrist",
    "LHand", "RHand",
)

_ALIAS_TABLE = {"LShoulder": ("LArm",), "RShoulder": ("RArm",)}


def _side_of(name: str) -> Side:
    if name.startswith("L"):
        return Side.LEFT
    if name.startswith("R"):
        return Side.RIGHT
    return Side.CENTER


class Registry:
    """Immutable table of joints with name/alias lookup and channel indexing.

    A channel index packs (joint ordinal, axis ordinal) as ``ordinal*3 + axis``,
    a bijection onto ``range(3 * len(joints))``.
    """

    def __init__(self, joints: Sequence[JointInfo]):
        self.joints: tuple[JointInfo, ...] = tuple(joints)
        self._by_name: dict[str, JointInfo] = {}
        for j in self.joints:
            self._by_name[j.name] = j
            for a in j.aliases:
                self._by_name[a] = j

    @property
    def num_channels(self) -> int:
        return 3 * len(self.joints)

    def known_names(self) -> tuple[str, ...]:
        return tuple(self._by_name)

    def resolve(self, name: str) -> JointInfo:
        try:
            return self._by_name[name]
        except KeyError:
            near = difflib.get_close_matches(name, self._by_name, n=3)
            hint = f" (nearest: {', '.join(near)})" if near else ""
            raise RegistryError(f"unknown joint name {name!r}{hint}") from None

    def channel_index(self, joint_name: str, axis: str) -> int:
        info = self.resolve(joint_name)
        if axis not in AXES:
            raise RegistryError(f"unknown axis {axis!r}, expected one of {AXES}")
        return info.ordinal * 3 + AXES.index(axis)

    def channel_from_index(self, index: int) -> tuple[str, str]:
        """Inverse of channel_index; returns (canonical joint name, axis)."""
        if not 0 <= index < self.num_channels:
            raise RegistryError(f"channel index {index} out of range [0, {self.num_channels})")
        return self.joints[index // 3].name, AXES[index % 3]

    def print_name(self, joint_name: str) -> str:
        info = self.resolve(joint_name)
        return info.print_alias or info.name

    def subset(self, names: Iterable[str]) -> "Registry":
        """Registry restricted to the given canonical names, ordinals reassigned."""
        keep = []
        for i, name in enumerate(names):
            j = self.resolve(name)
            keep.append(JointInfo(j.name, i, j.side, j.base, j.aliases, j.print_alias))
        return Registry(keep)


def _default_registry() -> Registry:
    joints = []
    for i, name in enumerate(_JOINT_NAMES):
        side = _side_of(name)
        base = name[1:] if side is not Side.CENTER else name
        aliases = _ALIAS_TABLE.get(name, ())
        joints.append(JointInfo(name, i, side, base, aliases, aliases[0] if aliases else None))
    return Registry(joints)


DEFAULT_REGISTRY = _default_registry()


def resolve_joint(name: str, registry: Registry = DEFAULT_REGISTRY) -> str:
    """Canonical joint name for a canonical name or registered alias."""
    return registry.resolve(name).name


@dataclass(frozen=True)
class JointAxisChannel:
    """A single scalar pose channel: one joint, one axis.

    The joint may be given by alias; it is stored canonically.
    """

    joint: str
    axis: str

    def __post_init__(self):
        object.__setattr__(self, "joint", DEFAULT_REGISTRY.resolve(self.joint).name)
        if self.axis not in AXES:
            raise RegistryError(f"unknown axis {self.axis!r}, expected one of {AXES}")

    @property
    def side(self) -> Side:
        return DEFAULT_REGISTRY.resolve(self.joint).side

    @property
    def index(self) -> int:
        return DEFAULT_REGISTRY.channel_index(self.joint, self.axis)


def channel_index(channel: JointAxisChannel) -> int:
    return channel.index


def channel_from_index(index: int) -> JointAxisChannel:
    joint, axis = DEFAULT_REGISTRY.channel_from_index(index)
    return JointAxisChannel(joint, axis)


@dataclass(frozen=True)
class SensorTarget:
    """A position predicate: drive ``channel`` toward ``scaled / 10000``.

    ``scaled`` is the target in fixed-point units and must lie in
    [-10000, 10000], i.e. targets live in [-1, 1].
    """

    channel: JointAxisChannel
    scaled: int

    def __post_init__(self):
        if not isinstance(self.scaled, int):
            raise ProgramError(f"target must be a fixed-point integer, got {self.scaled!r}")
        if not -TARGET_SCALE <= self.scaled <= TARGET_SCALE:
            raise ProgramError(f"target {self.scaled / TARGET_SCALE} out of [-1, 1]")

    @classmethod
    def from_value(cls, channel: JointAxisChannel, value: float) -> "SensorTarget":
        """Round a real target to the 4-decimal grid (ties to even)."""
        return cls(channel, round(value * TARGET_SCALE))

    @property
    def target(self) -> float:
        return self.scaled / TARGET_SCALE


@dataclass(frozen=True)
class MotionSpec:
    """One motion: a closed timestep window plus its sensor targets.

    Construction rejects structural defects (empty or duplicated sensors,
    negative times). Temporal ordering and horizon bounds are checked by
    :func:`validate`, which reports rather than raises.
    """

    t_start: int
    t_end: int
    sensors: tuple[SensorTarget, ...]

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(self.sensors))
        if self.t_start < 0 or self.t_end < 0:
            raise ProgramError("timestep indices must be non-negative")
        if not self.sensors:
            raise ProgramError("a motion needs at least one sensor")
        seen = set()
        for s in self.sensors:
            if s.channel in seen:
                raise ProgramError(f"duplicate channel {s.channel.joint}.{s.channel.axis} in one motion")
            seen.add(s.channel)

    @property
    def channels(self) -> frozenset[JointAxisChannel]:
        return frozenset(s.channel for s in self.sensors)


@dataclass(frozen=True)
class MotionProgram:
    """An ordered, non-empty sequence of motions."""

    motions: tuple[MotionSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "motions", tuple(self.motions))
        if not self.motions:
            raise ProgramError("a program needs at least one motion")

    @property
    def channels(self) -> frozenset[JointAxisChannel]:
        return frozenset(c for m in self.motions for c in m.channels)

    @property
    def max_t_end(self) -> int:
        return max(m.t_end for m in self.motions)


def canonicalize(program: MotionProgram) -> MotionProgram:
    """Motions sorted by (t_start, t_end), stable; sensor order untouched.

    Idempotent; the parser preserves source order so that surface forms can be
    reproduced, while all structural comparisons go through this form.
    """
    return MotionProgram(tuple(sorted(program.motions, key=lambda m: (m.t_start, m.t_end))))


@dataclass(frozen=True)
class Horizon:
    """Maximum timestep index T; motion windows must satisfy t_end <= T."""

    T: int = 1024

    def __post_init__(self):
        if self.T < 1:
            raise ProgramError("horizon must be positive")


def as_horizon(value: "Horizon | int | None") -> Horizon:
    if value is None:
        return Horizon()
    if isinstance(value, Horizon):
        return value
    return Horizon(int(value))


@dataclass(frozen=True)
class ValidationIssue:
    severity: Severity
    message: str
    motion_index: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...] = field(default=())

    @property
    def errors(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity is Severity.WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(program: MotionProgram, horizon: "Horizon | int | None" = None) -> ValidationReport:
    """Check timing constraints against a horizon.

    Violations of ``t_start < t_end`` and ``t_end <= T`` are errors.
    Overlapping motion windows (closed intervals, shared endpoints included)
    are reported as warnings; overlap is resolved downstream by disjunction.
    """
    T = as_horizon(horizon).T
    issues: list[ValidationIssue] = []
    for i, m in enumerate(program.motions):
        if not m.t_start < m.t_end:
            issues.append(ValidationIssue(
                Severity.ERROR, f"motion {i}: t_start < t_end violated ([{m.t_start},{m.t_end}])", i))
        if m.t_end > T:
            issues.append(ValidationIssue(
                Severity.ERROR, f"motion {i}: t_end <= T violated ({m.t_end} > {T})", i))
    ordered = sorted(range(len(program.motions)),
                     key=lambda k: (program.motions[k].t_start, program.motions[k].t_end))
    reach_end = -1  # furthest t_end among motions already swept
    reach_idx = -1
    for b in ordered:
        mb = program.motions[b]
        if reach_idx >= 0 and mb.t_start <= reach_end:
            issues.append(ValidationIssue(
                Severity.WARNING,
                f"motions {reach_idx} and {b} overlap on "
                f"[{mb.t_start},{min(reach_end, mb.t_end)}]",
                b))
        if mb.t_end > reach_end:
            reach_end, reach_idx = mb.t_end, b
    return ValidationReport(tuple(issues))
