"""Report Module.

Line-oriented check results shared by the verifiers, the rank-inequality checker and the
self-test runner. Every result renders as ``CHECK <name> PASS|FAIL <witness>``.
"""

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check.

    Attributes:
        name (str): Check name.
        passed (bool): Whether it holds.
        witness (str): First offending instance, or extra information.
    """

    name: str
    passed: bool
    witness: str = ""

    def line(self) -> str:
        """``CHECK <name> PASS|FAIL <witness>``."""
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} {status} {self.witness}".rstrip()


def all_passed(results: Iterable[CheckResult]) -> bool:
    """True when no result failed."""
    return all(result.passed for result in results)


def render(results: Iterable[CheckResult]) -> str:
    """One line per result."""
    return "\n".join(result.line() for result in results)
