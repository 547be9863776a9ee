"""Embedded platform knowledge base: linguistic profiles, statistic profiles
and tool performance records, plus the derivations built on them (frequency
interval mapping, per-platform best tools) and load-time integrity checks.

The knowledge base ships as a versioned JSON data file. Scores are compared
with exact decimal arithmetic so that printed two-decimal values neither gain
nor lose ties to floating-point noise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import IntegrityError, KnowledgeBaseError
from .textstats import STAT_FIELDS


class Platform(str, Enum):
    APP_REVIEWS = "AppReviews"
    CODE_REVIEWS = "CodeReviews"
    GITHUB = "GitHub"
    JIRA = "Jira"
    STACK_OVERFLOW = "StackOverflow"


#: Stable platform order used in every derived table and JSON document.
PLATFORM_ORDER: tuple[Platform, ...] = tuple(Platform)


class LinguisticFeature(str, Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    L7 = "L7"
    L8 = "L8"
    L9 = "L9"
    L10 = "L10"
    L11 = "L11"
    L12 = "L12"
    L13 = "L13"


FEATURE_ORDER: tuple[LinguisticFeature, ...] = tuple(LinguisticFeature)


class AnswerOption(str, Enum):
    """Questionnaire answer options; the four substantive ones map 1:1 to
    25-point frequency intervals."""

    TRUE = "true"
    LIKELY = "likely"
    UNLIKELY = "unlikely"
    UNTRUE = "untrue"
    NOT_SPECIFIED = "not_specified"


#: The substantive options in descending-frequency order.
SUBSTANTIVE_OPTIONS: tuple[AnswerOption, ...] = (
    AnswerOption.TRUE,
    AnswerOption.LIKELY,
    AnswerOption.UNLIKELY,
    AnswerOption.UNTRUE,
)


def interval_of(frequency: float) -> AnswerOption:
    """Bucket a frequency percentage into its answer option.

    Intervals are lower-inclusive: [0,25) untrue, [25,50) unlikely,
    [50,75) likely, [75,100] true.
    """
    if not 0.0 <= frequency <= 100.0:
        raise ValueError(f"frequency must be in [0, 100], got {frequency}")
    if frequency < 25.0:
        return AnswerOption.UNTRUE
    if frequency < 50.0:
        return AnswerOption.UNLIKELY
    if frequency < 75.0:
        return AnswerOption.LIKELY
    return AnswerOption.TRUE


@dataclass(frozen=True)
class FeatureInfo:
    """Human-facing name and description of a linguistic feature."""

    id: LinguisticFeature
    name: str
    description: str


@dataclass(frozen=True)
class PlatformLinguisticProfile:
    """Per-feature occurrence frequency (percentage) for one platform."""

    platform: Platform
    frequencies: Mapping[LinguisticFeature, float]

    def __post_init__(self):
        object.__setattr__(self, "frequencies", dict(self.frequencies))
        missing = [f.value for f in FEATURE_ORDER if f not in self.frequencies]
        if missing:
            raise KnowledgeBaseError(
                f"{self.platform.value}: linguistic profile missing features {missing}"
            )


@dataclass(frozen=True)
class PlatformStatProfile:
    """The eight statistic averages for one platform, keyed by STAT_FIELDS."""

    platform: Platform
    values: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))
        missing = [name for name in STAT_FIELDS if name not in self.values]
        if missing:
            raise KnowledgeBaseError(
                f"{self.platform.value}: statistic profile missing fields {missing}"
            )


@dataclass(frozen=True)
class ToolPerformanceRecord:
    """One tool's scores on one dataset; ``overall`` is the printed column."""

    tool: str
    dataset: str
    platform: Platform
    micro_f1: float
    macro_f1: float
    overall: float

    def overall_recomputed(self) -> Fraction:
        """(micro + macro) / 2 in exact decimal arithmetic; authoritative over
        the printed overall column."""
        return (exact_decimal(self.micro_f1) + exact_decimal(self.macro_f1)) / 2

    def overall_consistent(self, tolerance: Fraction = Fraction(1, 100)) -> bool:
        return abs(exact_decimal(self.overall) - self.overall_recomputed()) <= tolerance


def exact_decimal(value: float) -> Fraction:
    """The exact decimal a float prints as.

    str() of a float is its shortest round-tripping decimal, so this recovers
    the exact printed value for data entered with a few decimals; score
    comparisons on such Fractions keep genuine ties and genuine 0.01 gaps.
    """
    return Fraction(str(value))


@dataclass(frozen=True)
class FeatureIntervalMap:
    """Answer option per (feature, platform), with reverse lookup per option."""

    options: Mapping[LinguisticFeature, Mapping[Platform, AnswerOption]]

    def __post_init__(self):
        object.__setattr__(
            self, "options", {f: dict(per) for f, per in self.options.items()}
        )

    def option_for(self, feature: LinguisticFeature, platform: Platform) -> AnswerOption:
        return self.options[feature][platform]

    def platforms_for(
        self, feature: LinguisticFeature, option: AnswerOption
    ) -> tuple[Platform, ...]:
        per_platform = self.options[feature]
        return tuple(p for p in PLATFORM_ORDER if per_platform[p] == option)

    def answers_for(self, platform: Platform) -> dict[LinguisticFeature, AnswerOption]:
        """The answer vector a dataset identical to ``platform`` would give."""
        return {f: self.options[f][platform] for f in FEATURE_ORDER}

    def to_dict(self) -> dict:
        return {
            f.value: {
                option.value: [p.value for p in self.platforms_for(f, option)]
                for option in SUBSTANTIVE_OPTIONS
                if self.platforms_for(f, option)
            }
            for f in FEATURE_ORDER
        }


def derive_mapping(
    profiles: Mapping[Platform, PlatformLinguisticProfile]
) -> FeatureIntervalMap:
    """Bucket every (feature, platform) frequency into its answer option.

    All five platforms with all thirteen features must be present.
    """
    missing = [p.value for p in PLATFORM_ORDER if p not in profiles]
    if missing:
        raise KnowledgeBaseError(f"linguistic profiles missing platforms {missing}")
    options = {
        feature: {
            platform: interval_of(profiles[platform].frequencies[feature])
            for platform in PLATFORM_ORDER
        }
        for feature in FEATURE_ORDER
    }
    return FeatureIntervalMap(options=options)


def best_tool(
    platform: Platform, records: Iterable[ToolPerformanceRecord]
) -> tuple[str, ...]:
    """Tools with the highest mean recomputed overall across the platform's
    datasets; exact ties return every maximizer (sorted).

    Raises KnowledgeBaseError when no record covers the platform.
    """
    platform = Platform(platform)
    per_tool: dict[str, list[Fraction]] = {}
    for record in records:
        if record.platform == platform:
            per_tool.setdefault(record.tool, []).append(record.overall_recomputed())
    if not per_tool:
        raise KnowledgeBaseError(f"no performance records for platform {platform.value}")
    means = {tool: sum(scores) / len(scores) for tool, scores in per_tool.items()}
    top = max(means.values())
    return tuple(sorted(tool for tool, mean in means.items() if mean == top))


@dataclass(frozen=True)
class IntegrityReport:
    """Outcome of the load-time checks; ``flagged`` lists every inconsistent
    performance cell (they must all be documented anomalies)."""

    flagged: tuple[tuple[str, str], ...]  # (tool, dataset)
    checks_run: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "flagged_cells": [
                {"tool": tool, "dataset": dataset} for tool, dataset in self.flagged
            ],
            "checks_run": list(self.checks_run),
        }


@dataclass(frozen=True)
class KnowledgeBase:
    """Everything the recommender needs, loaded and integrity-checked."""

    schema_version: str
    features: Mapping[LinguisticFeature, FeatureInfo]
    linguistic: Mapping[Platform, PlatformLinguisticProfile]
    statistics: Mapping[Platform, PlatformStatProfile]
    performance: tuple[ToolPerformanceRecord, ...]
    known_anomalies: frozenset[tuple[str, str]]
    fallback_tools: tuple[str, ...]
    integrity: IntegrityReport
    mapping: FeatureIntervalMap = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "mapping", derive_mapping(self.linguistic))

    def best_tools(self) -> dict[Platform, tuple[str, ...]]:
        return {p: best_tool(p, self.performance) for p in PLATFORM_ORDER}


def bundled_kb_path() -> Path:
    return Path(str(resources.files("sentimatch") / "data" / "knowledge_base.json"))


def load_knowledge_base(path: str | Path | None = None) -> KnowledgeBase:
    """Load and integrity-check a knowledge-base file (bundled one by default).

    Checks: structural completeness, value ranges, interval-mapping
    re-derivation against the embedded expected table, and overall-score
    consistency where every violating cell must appear on the file's
    known-anomaly list. Any other violation raises IntegrityError naming the
    offending cells.
    """
    kb_path = Path(path) if path is not None else bundled_kb_path()
    try:
        raw = json.loads(kb_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise KnowledgeBaseError(f"cannot read knowledge base {kb_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise KnowledgeBaseError(f"{kb_path}: invalid JSON: {exc}") from exc

    for key in (
        "schema_version",
        "features",
        "linguistic_profiles",
        "statistic_profiles",
        "tool_performance",
        "expected_interval_mapping",
        "known_overall_anomalies",
        "fallback_tools",
    ):
        if key not in raw:
            raise KnowledgeBaseError(f"{kb_path}: missing top-level key {key!r}")

    features: dict[LinguisticFeature, FeatureInfo] = {}
    for entry in raw["features"]:
        feature = LinguisticFeature(entry["id"])
        features[feature] = FeatureInfo(
            id=feature, name=entry["name"], description=entry["description"]
        )
    if set(features) != set(FEATURE_ORDER):
        raise KnowledgeBaseError(f"{kb_path}: feature list must cover exactly L1..L13")

    linguistic: dict[Platform, PlatformLinguisticProfile] = {}
    for name, freqs in raw["linguistic_profiles"].items():
        platform = Platform(name)
        parsed = {LinguisticFeature(fid): float(v) for fid, v in freqs.items()}
        for feature, value in parsed.items():
            if not 0.0 <= value <= 100.0:
                raise IntegrityError(
                    f"{kb_path}: {name}/{feature.value}: frequency {value} outside [0, 100]"
                )
        linguistic[platform] = PlatformLinguisticProfile(platform=platform, frequencies=parsed)

    statistics: dict[Platform, PlatformStatProfile] = {}
    for name, values in raw["statistic_profiles"].items():
        platform = Platform(name)
        parsed_stats = {str(k): float(v) for k, v in values.items()}
        for stat_name, value in parsed_stats.items():
            if value < 0.0:
                raise IntegrityError(
                    f"{kb_path}: {name}/{stat_name}: negative statistic {value}"
                )
        statistics[platform] = PlatformStatProfile(platform=platform, values=parsed_stats)

    missing_platforms = [p.value for p in PLATFORM_ORDER if p not in linguistic or p not in statistics]
    if missing_platforms:
        raise KnowledgeBaseError(f"{kb_path}: profiles missing platforms {missing_platforms}")

    records: list[ToolPerformanceRecord] = []
    seen_cells: set[tuple[str, str]] = set()
    for entry in raw["tool_performance"]:
        record = ToolPerformanceRecord(
            tool=str(entry["tool"]),
            dataset=str(entry["dataset"]),
            platform=Platform(entry["platform"]),
            micro_f1=float(entry["micro_f1"]),
            macro_f1=float(entry["macro_f1"]),
            overall=float(entry["overall"]),
        )
        cell = (record.tool, record.dataset)
        if cell in seen_cells:
            raise KnowledgeBaseError(f"{kb_path}: duplicate performance cell {cell}")
        seen_cells.add(cell)
        for score_name in ("micro_f1", "macro_f1", "overall"):
            score = getattr(record, score_name)
            if not 0.0 <= score <= 1.0:
                raise IntegrityError(
                    f"{kb_path}: {record.tool}/{record.dataset}: {score_name}={score} outside [0, 1]"
                )
        records.append(record)

    known_anomalies = frozenset(
        (str(a["tool"]), str(a["dataset"])) for a in raw["known_overall_anomalies"]
    )
    flagged = tuple(
        sorted((r.tool, r.dataset) for r in records if not r.overall_consistent())
    )
    unexpected = [cell for cell in flagged if cell not in known_anomalies]
    if unexpected:
        raise IntegrityError(
            f"{kb_path}: overall-score inconsistencies outside the documented anomaly list: {unexpected}"
        )
    stale = sorted(known_anomalies - set(flagged))
    if stale:
        raise IntegrityError(
            f"{kb_path}: documented anomalies that are not actually inconsistent: {stale}"
        )

    derived = derive_mapping(linguistic)
    expected = _parse_expected_mapping(raw["expected_interval_mapping"], kb_path)
    if derived != expected:
        diffs = _mapping_diff(derived, expected)
        raise IntegrityError(
            f"{kb_path}: derived interval mapping disagrees with the embedded expected table: {diffs}"
        )

    fallback = tuple(str(t) for t in raw["fallback_tools"])
    known_tools = {r.tool for r in records}
    unknown_fallback = [t for t in fallback if t not in known_tools]
    if unknown_fallback:
        raise IntegrityError(f"{kb_path}: fallback tools without records: {unknown_fallback}")

    report = IntegrityReport(
        flagged=flagged,
        checks_run=(
            "structure",
            "value_ranges",
            "interval_mapping_rederivation",
            "overall_score_consistency",
            "fallback_tools_known",
        ),
    )
    return KnowledgeBase(
        schema_version=str(raw["schema_version"]),
        features=features,
        linguistic=linguistic,
        statistics=statistics,
        performance=tuple(records),
        known_anomalies=known_anomalies,
        fallback_tools=fallback,
        integrity=report,
    )


def _parse_expected_mapping(raw: Mapping, kb_path: Path) -> FeatureIntervalMap:
    options: dict[LinguisticFeature, dict[Platform, AnswerOption]] = {}
    for fid, per_option in raw.items():
        feature = LinguisticFeature(fid)
        per_platform: dict[Platform, AnswerOption] = {}
        for option_name, platforms in per_option.items():
            option = AnswerOption(option_name)
            for name in platforms:
                platform = Platform(name)
                if platform in per_platform:
                    raise KnowledgeBaseError(
                        f"{kb_path}: expected mapping assigns {name} twice for {fid}"
                    )
                per_platform[platform] = option
        missing = [p.value for p in PLATFORM_ORDER if p not in per_platform]
        if missing:
            raise KnowledgeBaseError(
                f"{kb_path}: expected mapping for {fid} missing platforms {missing}"
            )
        options[feature] = per_platform
    if set(options) != set(FEATURE_ORDER):
        raise KnowledgeBaseError(f"{kb_path}: expected mapping must cover exactly L1..L13")
    return FeatureIntervalMap(options=options)


def _mapping_diff(derived: FeatureIntervalMap, expected: FeatureIntervalMap) -> list[str]:
    diffs = []
    for feature in FEATURE_ORDER:
        for platform in PLATFORM_ORDER:
            got = derived.options[feature][platform]
            want = expected.options[feature][platform]
            if got != want:
                diffs.append(f"{feature.value}/{platform.value}: {got.value} != {want.value}")
    return diffs
