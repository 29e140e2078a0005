"""Per-pixel verdict codes shared by the kernels, rasters and file formats."""
import enum


class Tag(enum.IntEnum):
    UNDECIDED = 0
    ESCAPED_CONSECUTIVE = 1
    ESCAPED_SINGLE = 2
    ESCAPED_OUTER = 3
    INSIDE_EXACT_C0 = 4
    INSIDE_BIDISK = 5
    INSIDE_PERIODIC = 6
    LOCUS_INSIDE_BOUND = 7
    LOCUS_OUTSIDE_BOUND = 8
    LOCUS_BOUNDED = 9
    LOCUS_ESCAPED = 10
    ERROR = 255

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Tag":
        return cls[label.upper()]


ESCAPED_TAGS = frozenset({
    Tag.ESCAPED_CONSECUTIVE, Tag.ESCAPED_SINGLE, Tag.ESCAPED_OUTER,
    Tag.LOCUS_OUTSIDE_BOUND, Tag.LOCUS_ESCAPED,
})
INSIDE_TAGS = frozenset({
    Tag.UNDECIDED, Tag.INSIDE_EXACT_C0, Tag.INSIDE_BIDISK, Tag.INSIDE_PERIODIC,
    Tag.LOCUS_INSIDE_BOUND, Tag.LOCUS_BOUNDED,
})
