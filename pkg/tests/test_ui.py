import asyncio

from textual.widgets import DataTable

from flowsketch.config.experiment import build_experiment_config
from flowsketch.main import FlowsketchApp
from flowsketch.ui.rates import RatesScreen
from flowsketch.ui.results import ResultsScreen


async def _rows(pilot, selector: str, expected: int) -> int:
    table = None
    for _ in range(50):
        await pilot.pause(0.1)
        table = pilot.app.screen.query_one(selector, DataTable)
        if table.row_count >= expected:
            break
    return table.row_count


def test_results_and_rates_screens(service, tmp_path):
    service.run(build_experiment_config({
        "n_flows": 50, "alpha": 1.1, "total_packets": 2_000, "seeds": (42, 7),
        "k": 5, "grid": ((2, 16), (3, 64)), "out_dir": tmp_path,
    }))

    async def scenario():
        app = FlowsketchApp(service, tmp_path)
        async with app.run_test(size=(160, 50)) as pilot:
            await pilot.pause()
            assert isinstance(app.screen, ResultsScreen)
            assert await _rows(pilot, "#cell-table", 4) == 4
            assert await _rows(pilot, "#report-table", 5) == 5

            await pilot.press("p")
            await pilot.pause()
            assert isinstance(app.screen, RatesScreen)
            assert await _rows(pilot, "#rates-table", 6) == 6

            await pilot.press("r")
            await pilot.pause()
            assert isinstance(app.screen, ResultsScreen)
            await pilot.press("q")

    asyncio.run(scenario())
