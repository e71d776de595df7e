import asyncio

from textual.app import ComposeResult
from textual.containers import Vertical
from textual.screen import Screen
from textual.widgets import DataTable, Footer, Header, Label, Static

from ..models.dimension import RateComparison
from ..services.experiment import ExperimentService


def _fmt_rate(value: float, unit: str) -> str:
    if value >= 1e6:
        return f"{value / 1e6:.2f} M {unit}/s"
    return f"{value / 1e3:.2f} K {unit}/s"


def _fmt_diff(rel_diff: float, flagged: bool) -> str:
    text = f"{rel_diff:+.1%}"
    return f"[red]{text}[/red]" if flagged else f"[green]{text}[/green]"


class RatesScreen(Screen):
    CSS = """
    RatesScreen {
        background: $surface;
    }

    #rates-card {
        border: round $primary;
        padding: 1 2;
        margin: 1 2;
        height: auto;
    }

    .card-title {
        text-align: center;
        text-style: bold;
        margin-bottom: 1;
    }

    #rates-table {
        height: auto;
        margin: 1 0;
    }

    #rates-note {
        color: $text-muted;
    }
    """

    _COLUMNS = (
        ("Line rate", 10), ("Load", 6),
        ("Flow rate", 16), ("Published", 16), ("Diff", 8),
        ("Packet rate", 16), ("Published", 16), ("Diff", 8),
    )

    def __init__(self, service: ExperimentService) -> None:
        super().__init__()
        self._service = service

    def compose(self) -> ComposeResult:
        yield Header()
        with Vertical(id="rates-card"):
            yield Label("Per-port Flow and Packet Rates", classes="card-title")
            yield DataTable(id="rates-table", cursor_type="row")
            yield Static("", id="rates-note")
        yield Footer()

    async def on_mount(self) -> None:
        table = self.query_one("#rates-table", DataTable)
        for label, width in self._COLUMNS:
            table.add_column(label, width=width)
        rows: list[RateComparison] = await asyncio.to_thread(self._service.published_rates)
        for c in rows:
            table.add_row(
                f"{c.published.line_rate / 1e9:.0f} Gb/s",
                f"{c.published.load:.0%}",
                _fmt_rate(c.estimate.flow_rate, "flow"),
                _fmt_rate(c.published.flow_rate, "flow"),
                _fmt_diff(c.flow_rate_rel_diff, c.flow_rate_discrepancy),
                _fmt_rate(c.estimate.packet_rate, "packet"),
                _fmt_rate(c.published.packet_rate, "packet"),
                _fmt_diff(c.packet_rate_rel_diff, c.packet_rate_discrepancy),
            )
        flagged = sum(c.packet_rate_discrepancy or c.flow_rate_discrepancy for c in rows)
        self.query_one("#rates-note", Static).update(
            f"{flagged} of {len(rows)} cells differ from the published value by more than 1%."
        )
