"""Recompute the three reference comparison tables."""

from __future__ import annotations

from dataclasses import dataclass

from . import keychain, meanfield
from .rates import TABLE1_PRESETS, preset

TABLE1_K = tuple(range(1, 7))
TABLE2_K = tuple(range(1, 8))
TABLE3_GAMMAS = (0.2, 0.3, 0.4, 0.5, 0.6)
GAMMA = 0.4


@dataclass(frozen=True)
class Table1:
    presets: tuple[str, ...]
    absorbing: dict[str, tuple[float, ...]]  # E[tau_k], k = 1..6
    literal_k1: dict[str, float]
    tau_hat: dict[str, float]
    k_c_absorbing: dict[str, int]
    k_c_literal: dict[str, int]

    def mode_disagreements(self) -> list[str]:
        return [p for p in self.presets if self.k_c_absorbing[p] != self.k_c_literal[p]]


def table1(rtol=meanfield.DEFAULT_RTOL, atol=meanfield.DEFAULT_ATOL) -> Table1:
    absorbing, literal, tau, kca, kcl = {}, {}, {}, {}, {}
    for name in TABLE1_PRESETS:
        r = preset(name)
        e = tuple(keychain.expected_hitting_time(r, k, rtol, atol=atol).value
                  for k in TABLE1_K)
        lit = keychain.expected_hitting_time(r, 1, rtol, mode=keychain.LITERAL_K1,
                                             atol=atol).value
        t = meanfield.trigger_time(r, GAMMA, rtol, atol).tau_hat
        absorbing[name], literal[name], tau[name] = e, lit, t
        kca[name] = keychain.select_k(t, e)[2]
        kcl[name] = keychain.select_k(t, (lit,) + e[1:])[2]
    return Table1(TABLE1_PRESETS, absorbing, literal, tau, kca, kcl)


def table2(rtol=meanfield.DEFAULT_RTOL, atol=meanfield.DEFAULT_ATOL) -> dict[int, float]:
    r = preset("aging")
    return {k: keychain.expected_hitting_time(r, k, rtol, atol=atol).value
            for k in TABLE2_K}


def table3(rtol=meanfield.DEFAULT_RTOL, atol=meanfield.DEFAULT_ATOL) -> dict[float, float]:
    r = preset("aging")
    return {g: meanfield.trigger_time(r, g, rtol, atol).tau_hat for g in TABLE3_GAMMAS}


def _g(v) -> str:
    return f"{v:.6g}"


def _grid(header, rows):
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    line = lambda cells: "  ".join(str(c).rjust(w) for c, w in zip(cells, widths))
    out = [line(header), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in rows]
    return "\n".join(out)


def table1_rows(t: Table1):
    """CSV rows ``(row_label, value per preset...)``."""
    rows = [[str(k)] + [t.absorbing[p][k - 1] for p in t.presets] for k in TABLE1_K]
    rows.append(["1 (literal-k1)"] + [t.literal_k1[p] for p in t.presets])
    rows.append(["tau_hat_gamma"] + [t.tau_hat[p] for p in t.presets])
    rows.append(["k_c (absorbing)"] + [t.k_c_absorbing[p] for p in t.presets])
    rows.append(["k_c (literal-k1)"] + [t.k_c_literal[p] for p in t.presets])
    return rows


def format_table1(t: Table1) -> str:
    rows = [[r[0]] + [_g(v) if isinstance(v, float) else str(v) for v in r[1:]]
            for r in table1_rows(t)]
    text = _grid(["k"] + list(t.presets), rows)
    bad = t.mode_disagreements()
    text += ("\nnote: rows 1 and '1 (literal-k1)' use the absorbing and the "
             "literal k=1 equations respectively")
    if bad:
        text += f"\nnote: k_c differs between modes for: {', '.join(bad)}"
    return text


def format_table2(t: dict[int, float]) -> str:
    return _grid(["k"] + [str(k) for k in t], [["E_tau_k"] + [_g(v) for v in t.values()]])


def format_table3(t: dict[float, float]) -> str:
    return _grid(["gamma"] + [f"{g:g}" for g in t],
                 [["tau_hat_gamma"] + [_g(v) for v in t.values()]])
