from __future__ import annotations

import pytest

import insightloom as il


@pytest.fixture(scope="session")
def callcenter_spec():
    return il.load_dashboard(str(il.FIXTURE_PATH))


@pytest.fixture(scope="session")
def callcenter_insights(callcenter_spec):
    return il.generate_insights(callcenter_spec)


def minimal_doc() -> dict:
    return {
        "id": "mini",
        "title": "Minimal",
        "panels": [
            {
                "panelId": "A",
                "chartType": "Bar",
                "row": 0,
                "col": 0,
                "tableId": "t1",
                "title": "Calls by Weekday",
            }
        ],
        "tables": {
            "t1": {
                "columns": [
                    {"name": "Weekday", "role": "Dimension"},
                    {"name": "Calls", "role": "Metric"},
                ],
                "rows": [["Monday", 10], ["Tuesday", 30]],
            }
        },
    }
