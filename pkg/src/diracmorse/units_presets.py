"""Unit conventions, the CO molecule preset and the scan of unit
conventions against the tabulated CO reference energies.

Constants are pinned literals so results never depend on a library update:

* Hartree energy 27.211386 eV (CODATA 2018: 27.211386245988 eV)
* Bohr radius 0.529177211 Angstrom (CODATA 2018: 0.529177210903 Angstrom)
* proton-scale mass unit 1822.888486 electron masses per amu
  (CODATA 2018: 1822.888486209)
* amu c^2 = 931.49410242 MeV and hbar c = 197.3269804 MeV fm (CODATA 2018),
  used only by the ``AmuMassUnit`` convention.
"""

from dataclasses import dataclass
import math

from .eigensolver import SolverConfig, solve_energy
from .errors import DomainError, EmptyDomain, NoRoot
from .morse_model import PDM, MorseProblem

HARTREE_EV = 27.211386
BOHR_ANGSTROM = 0.529177211
AMU_ELECTRON_MASSES = 1822.888486
AMU_C2_EV = 931.49410242e6
HBAR_C_EV_ANGSTROM = 197.3269804e6 * 1e-5  # MeV fm -> eV Angstrom

CODATA = {
    "HARTREE_EV": 27.211386245988,
    "BOHR_ANGSTROM": 0.529177210903,
    "AMU_ELECTRON_MASSES": 1822.888486209,
}

RAW = "RawNumbers"
HARTREE = "HartreeAtomic"
AMU = "AmuMassUnit"
CONVENTIONS = (RAW, HARTREE, AMU)

MATCH_TOL = 1e-3


@dataclass(frozen=True)
class UnitConvention:
    """Multiplicative factors taking preset units (eV, Angstrom, amu) to internal ones.

    ``width`` converts ``a`` (taken as inverse Angstrom outside RawNumbers).
    """

    tag: str
    energy: float
    length: float
    mass: float

    def __post_init__(self):
        if self.tag not in CONVENTIONS:
            raise DomainError(f"unknown convention {self.tag!r}")
        for name in ("energy", "length", "mass"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} factor must be positive")

    @property
    def width(self):
        return 1.0 / self.length

    @classmethod
    def from_tag(cls, tag):
        if tag == RAW:
            return cls(RAW, 1.0, 1.0, 1.0)
        if tag == HARTREE:
            return cls(HARTREE, 1.0 / HARTREE_EV, 1.0 / BOHR_ANGSTROM, AMU_ELECTRON_MASSES)
        if tag == AMU:
            # hbar = c = 1 with amu c^2 as the energy unit; length unit hbar c / (amu c^2)
            length_unit = HBAR_C_EV_ANGSTROM / AMU_C2_EV
            return cls(AMU, 1.0 / AMU_C2_EV, 1.0 / length_unit, 1.0)
        raise DomainError(f"unknown convention {tag!r}")


@dataclass(frozen=True)
class MoleculePreset:
    name: str
    D_eV: float
    r0_angstrom: float
    m0_amu: float
    a_width: float

    def __post_init__(self):
        for name in ("D_eV", "r0_angstrom", "m0_amu", "a_width"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class InternalParameters:
    D: float
    r0: float
    a: float
    m0: float
    convention: str


def co_preset():
    """Carbon monoxide: D = 11.2256 eV, r0 = 1.1283 A, reduced mass 6.8606719 amu, a = 2.59441."""
    return MoleculePreset("CO", 11.2256, 1.1283, 6.8606719, 2.59441)


def _convention(convention):
    return convention if isinstance(convention, UnitConvention) else UnitConvention.from_tag(convention)


def to_internal(preset, convention):
    c = _convention(convention)
    return InternalParameters(
        D=preset.D_eV * c.energy,
        r0=preset.r0_angstrom * c.length,
        a=preset.a_width * c.width,
        m0=preset.m0_amu * c.mass,
        convention=c.tag,
    )


def from_internal(params, name="preset"):
    c = UnitConvention.from_tag(params.convention)
    return MoleculePreset(
        name,
        D_eV=params.D / c.energy,
        r0_angstrom=params.r0 / c.length,
        m0_amu=params.m0 / c.mass,
        a_width=params.a / c.width,
    )


@dataclass(frozen=True)
class TableRow:
    ell_tilde: int
    n: int
    kappa: int
    label: str
    energy: float


CO_REFERENCE_ROWS = (
    TableRow(1, 1, -1, "1s1/2", 6.15913020),
    TableRow(2, 1, -2, "1p3/2", 6.52968379),
    TableRow(3, 1, -3, "1d5/2", 6.89146288),
    TableRow(4, 1, -4, "1f7/2", 7.24974882),
)


@dataclass(frozen=True)
class ScanEntry:
    convention: str
    row: TableRow
    n: int
    status: str  # matched | mismatch | EmptyDomain | NoRoot | Unresolved
    energies: tuple
    deviations: tuple
    residuals: tuple
    unresolved: tuple = ()  # (E, residual) of sign changes that stay above tolerance

    @property
    def best_deviation(self):
        return min(self.deviations) if self.deviations else math.nan


@dataclass(frozen=True)
class DiscrepancyReport:
    entries: tuple
    form: str

    def matched_conventions(self):
        """Conventions whose every row matches under at least one n reading."""
        out = []
        for conv in dict.fromkeys(e.convention for e in self.entries):
            rows = {}
            for e in self.entries:
                if e.convention == conv and e.status == "matched":
                    rows[e.row] = min(rows.get(e.row, math.inf), e.best_deviation)
            n_rows = len({e.row for e in self.entries if e.convention == conv})
            if len(rows) == n_rows:
                out.append((conv, max(rows.values())))
        return out

    def best_convention(self):
        """(convention, max relative deviation) of the best full match, or None."""
        found = self.matched_conventions()
        return min(found, key=lambda t: t[1]) if found else None

    def summary(self):
        lines = [f"convention scan ({self.form} form), {len(self.entries)} entries"]
        for conv in dict.fromkeys(e.convention for e in self.entries):
            counts = {}
            for e in self.entries:
                if e.convention == conv:
                    counts[e.status] = counts.get(e.status, 0) + 1
            tally = ", ".join(f"{k} x{v}" for k, v in sorted(counts.items()))
            lines.append(f"  {conv}: {tally}")
        best = self.best_convention()
        if best is None:
            lines.append("no convention reproduces all reference energies within 1e-3 relative")
        else:
            lines.append(f"best convention: {best[0]} (max relative deviation {best[1]:.9g})")
        return "\n".join(lines)


def convention_scan(preset, table_rows=CO_REFERENCE_ROWS, conventions=CONVENTIONS, n_values=(0, 1), form="reference",
                    config=None):
    """Solve every table row in PDM mode under each convention and each n reading.

    Energies are compared by magnitude, since the tabulated values are
    unsigned. Failures are recorded in the report, never raised.

    A sign change whose bisection ends at adjacent floats with the residual
    still above ``config.abs_tol`` is not reported as an energy; the entry is
    classed ``Unresolved`` and the offending (E, residual) pairs are kept.
    This happens next to E = m0, where the residual can move by 1e-4 per ulp.
    """
    config = config or SolverConfig(form=form, branch="any")
    if config.form != form:
        config = SolverConfig(**{**config.__dict__, "form": form})
    entries = []
    for tag in conventions:
        p = to_internal(preset, tag)
        for row in table_rows:
            problem = MorseProblem.build(PDM, p.D, p.r0, p.a, p.m0, row.kappa)
            for n in n_values:
                try:
                    res = solve_energy(problem, n, config)
                except EmptyDomain:
                    entries.append(ScanEntry(tag, row, n, "EmptyDomain", (), (), ()))
                    continue
                except NoRoot:
                    entries.append(ScanEntry(tag, row, n, "NoRoot", (), (), ()))
                    continue
                if not res.roots:
                    bad = tuple((r.E, r.residual) for r in res.unconverged)
                    entries.append(ScanEntry(tag, row, n, "Unresolved", (), (), (), bad))
                    continue
                Es = tuple(r.E for r in res.roots)
                devs = tuple(abs(abs(E) - row.energy) / row.energy for E in Es)
                resid = tuple(r.residual for r in res.roots)
                bad = tuple((r.E, r.residual) for r in res.unconverged)
                status = "matched" if min(devs) < MATCH_TOL else "mismatch"
                entries.append(ScanEntry(tag, row, n, status, Es, devs, resid, bad))
    return DiscrepancyReport(tuple(entries), form)
