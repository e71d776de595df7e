import asyncio
from pathlib import Path

from textual.app import ComposeResult
from textual.containers import Horizontal, Vertical, VerticalScroll
from textual.screen import Screen
from textual.widgets import Button, DataTable, Footer, Header, Label, Static

from ..models.experiment import SummaryRow
from ..models.report import HeavyHitterRow
from ..services.experiment import ExperimentService

_PAGE_SIZE = 20


def _fmt_error(value: float) -> str:
    if value == 0:
        return "[green]0[/green]"
    return f"[red]+{value:,.1f}[/red]"


def _bar(share: float, width: int) -> str:
    filled = round(share * width)
    return "[green]" + "█" * filled + "[/green][dim]" + "░" * (width - filled) + "[/dim]"


class ResultsScreen(Screen):
    CSS = """
    ResultsScreen {
        background: $surface;
    }

    #outer-layout {
        height: 1fr;
    }

    /* ── Left panel: run summary + per-cell table ── */
    #left-panel {
        width: 2fr;
        padding: 1 2;
    }

    .card {
        border: round $primary;
        padding: 1 2;
        margin-bottom: 1;
        height: auto;
    }

    .card-title {
        text-align: center;
        text-style: bold;
        margin-bottom: 1;
    }

    .row {
        height: 1;
    }

    .label {
        width: 1fr;
        color: $text-muted;
    }

    .value {
        width: auto;
        color: $accent;
        text-style: bold;
    }

    #cells-card {
        height: 28;
        border: round $primary;
        padding: 1 2;
    }

    #cell-table {
        height: 1fr;
        margin: 1 0;
    }

    #cell-pagination {
        height: 3;
        align: center middle;
        border-top: solid $panel;
    }

    #cell-pagination Button {
        width: 5;
        min-width: 5;
        height: 3;
    }

    #cell-page-label {
        height: 3;
        width: 12;
        content-align: center middle;
        color: $text-muted;
    }

    /* ── Right panel: selected cell's top-k report ── */
    #right-panel {
        width: 3fr;
        border-left: solid $primary;
        padding: 1 2;
    }

    #report-table {
        height: 1fr;
        margin: 1 0;
    }
    """

    _CELL_COLUMNS = (("d", 4), ("w", 7), ("seed", 6), ("Mean Over.", 12), ("Precision", 10), ("Recall", 8))
    _REPORT_COLUMNS = (("Rank", 5), ("Flow", 8), ("True", 9), ("Estimate", 9), ("Over.", 10), ("Rel.", 8), ("Share", 22))
    _BAR_WIDTH = 20

    def __init__(self, service: ExperimentService, run_dir: Path) -> None:
        super().__init__()
        self._service = service
        self._run_dir = run_dir
        self._rows: list[SummaryRow] = []
        self._page: int = 0

    def compose(self) -> ComposeResult:
        yield Header()
        with Horizontal(id="outer-layout"):
            with VerticalScroll(id="left-panel"):
                with Vertical(classes="card"):
                    yield Label("Run Summary", classes="card-title")
                    with Horizontal(classes="row"):
                        yield Label("Directory", classes="label")
                        yield Static(str(self._run_dir), id="run-dir", classes="value")
                    with Horizontal(classes="row"):
                        yield Label("Cells", classes="label")
                        yield Static("...", id="cell-count", classes="value")
                    with Horizontal(classes="row"):
                        yield Label("Seeds", classes="label")
                        yield Static("...", id="seed-count", classes="value")
                with Vertical(id="cells-card"):
                    yield Label("Grid Cells", classes="card-title")
                    yield DataTable(id="cell-table", cursor_type="row")
                    with Horizontal(id="cell-pagination"):
                        yield Button("<", id="cell-prev", disabled=True)
                        yield Label("—", id="cell-page-label")
                        yield Button(">", id="cell-next", disabled=True)
            with Vertical(id="right-panel"):
                yield Label("Top-k Report", id="report-title", classes="card-title")
                yield DataTable(id="report-table", cursor_type="row")
        yield Footer()

    async def on_mount(self) -> None:
        cells = self.query_one("#cell-table", DataTable)
        for label, width in self._CELL_COLUMNS:
            cells.add_column(label, width=width)
        report = self.query_one("#report-table", DataTable)
        for label, width in self._REPORT_COLUMNS:
            report.add_column(label, width=width)

        self._rows = await asyncio.to_thread(self._service.load_summary, self._run_dir)
        self.query_one("#cell-count", Static).update(str(len(self._rows)))
        self.query_one("#seed-count", Static).update(str(len({r.seed for r in self._rows})))
        self._render_cells()
        if self._rows:
            await self._show_report(self._rows[0])

    def _total_pages(self) -> int:
        return max(1, (len(self._rows) + _PAGE_SIZE - 1) // _PAGE_SIZE)

    def _render_cells(self) -> None:
        table = self.query_one("#cell-table", DataTable)
        table.clear()
        total_pages = self._total_pages()
        self._page = min(self._page, total_pages - 1)
        start = self._page * _PAGE_SIZE
        for index, r in enumerate(self._rows[start:start + _PAGE_SIZE], start=start):
            table.add_row(
                str(r.depth), str(r.width), str(r.seed),
                _fmt_error(r.mean_abs_error), f"{r.precision:.2f}", f"{r.recall:.2f}",
                key=str(index),
            )
        self.query_one("#cell-page-label", Label).update(f"{self._page + 1} / {total_pages}")
        self.query_one("#cell-prev", Button).disabled = self._page == 0
        self.query_one("#cell-next", Button).disabled = self._page >= total_pages - 1

    async def _show_report(self, row: SummaryRow) -> None:
        flows: list[HeavyHitterRow] = await asyncio.to_thread(
            self._service.load_cell_report, self._run_dir, row
        )
        self.query_one("#report-title", Label).update(
            f"Top-{len(flows)} Report · d={row.depth} w={row.width} seed={row.seed}"
        )
        table = self.query_one("#report-table", DataTable)
        table.clear()
        heaviest = max((f.true_count for f in flows), default=0)
        for f in flows:
            share = f.true_count / heaviest if heaviest else 0.0
            table.add_row(
                str(f.rank), str(f.flow_id), f"{f.true_count:,}", f"{f.estimated_count:,}",
                _fmt_error(f.abs_error), f"{f.rel_error:.1%}", _bar(share, self._BAR_WIDTH),
            )

    async def on_data_table_row_selected(self, event: DataTable.RowSelected) -> None:
        if event.data_table.id != "cell-table" or event.row_key.value is None:
            return
        await self._show_report(self._rows[int(event.row_key.value)])

    def on_button_pressed(self, event: Button.Pressed) -> None:
        btn_id = event.button.id
        if btn_id == "cell-prev" and self._page > 0:
            self._page -= 1
            self._render_cells()
        elif btn_id == "cell-next" and self._page < self._total_pages() - 1:
            self._page += 1
            self._render_cells()
