"""Fixed-width text tables for the final report."""

from __future__ import annotations

from .measures import MEASURES, rank_sites

MISSING = "—"

TITLES = {"diversity": "News diversity", "completeness": "News completeness", "speed": "Speed"}


def _table(title: str, rows: list[tuple[str, str]], value_header: str) -> str:
    width = max([4] + [len(site) for site, _ in rows])
    lines = [title, f"{'rank':<5} {'site':<{width}} {value_header}"]
    for i, (site, value) in enumerate(rows, start=1):
        lines.append(f"{i:<5} {site:<{width}} {value}")
    return "\n".join(lines)


def _fmt(v) -> str:
    return MISSING if v is None else f"{v:.3f}"


def render_tables(report: dict) -> str:
    """One table per measure (scores to 3 decimals), then one per search engine."""
    blocks = []
    sites = report["sites"]
    for m in MEASURES:
        order = report.get("rankings", {}).get(m) or rank_sites({s: v[m] for s, v in sites.items()})
        blocks.append(_table(TITLES[m], [(s, _fmt(sites[s][m])) for s in order], "score"))
    engines = report.get("search_engines", {})
    if engines:
        blocks.append(render_search_tables(engines).rstrip("\n"))
    return "\n\n".join(blocks) + "\n"


def render_search_tables(engines: dict) -> str:
    blocks = []
    for engine, res in sorted(engines.items()):
        scores = res["scores"]
        order = res.get("ranking") or rank_sites(scores)
        blocks.append(_table(f"{engine} ranking", [(s, str(scores[s])) for s in order], "RS"))
    return "\n\n".join(blocks) + "\n"
