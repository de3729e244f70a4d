"""Exception hierarchy.

Every validation failure raised by the library derives from
:class:`PrayatulError`, which the CLI maps to exit status 2.
"""

from __future__ import annotations


class PrayatulError(Exception):
    """Base class for data and validation errors."""


class LengthMismatch(PrayatulError):
    pass


class IdMismatch(PrayatulError):
    pass


class EmptyInput(PrayatulError):
    pass


class MissingFile(PrayatulError):
    def __init__(self, path, detail: str | None = None):
        self.path = str(path)
        msg = f"file not found: {self.path}"
        if detail:
            msg = f"{detail}: {msg}"
        super().__init__(msg)


class BadHeader(PrayatulError):
    pass


class DuplicateId(PrayatulError):
    def __init__(self, instance_id: str, where: str | None = None):
        self.instance_id = instance_id
        msg = f"duplicate instance id {instance_id!r}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


class MalformedRow(PrayatulError):
    def __init__(self, path, row: int, reason: str):
        self.path = str(path)
        self.row = row
        super().__init__(f"{self.path}: row {row}: {reason}")


class _InstanceSetError(PrayatulError):
    limit = 10
    kind = ""

    def __init__(self, ids, where: str | None = None):
        self.ids = list(ids)
        shown = ", ".join(self.ids[: self.limit])
        more = len(self.ids) - self.limit
        if more > 0:
            shown += f", ... ({more} more)"
        prefix = f"{where}: " if where else ""
        super().__init__(f"{prefix}{len(self.ids)} {self.kind}: {shown}")


class MissingInstance(_InstanceSetError):
    """Instance present in the ground truth but absent from a model file."""

    kind = "instance(s) missing from model file"


class ExtraInstance(_InstanceSetError):
    """Instance present in a model file but absent from the ground truth."""

    kind = "instance(s) not in ground truth"


class SchemaError(PrayatulError):
    def __init__(self, field: str, reason: str):
        self.field = field
        super().__init__(f"manifest field {field!r}: {reason}")


class MissingFold(PrayatulError):
    def __init__(self, model: str, fold: int):
        self.model = model
        self.fold = fold
        super().__init__(f"model {model!r} has no file for fold {fold}")


class UnknownPrimary(PrayatulError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(f"primary {name!r} is not one of the listed models: {', '.join(known)}")


class UnknownPositiveClass(PrayatulError):
    def __init__(self, label: str, classes):
        self.label = label
        super().__init__(f"positive class {label!r} not among classes {list(classes)}")


class MixedPair(PrayatulError):
    pass
