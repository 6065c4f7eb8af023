import time
from json import dumps, loads
from typing import Tuple

event_log_fh = None
event_filter = []
_opened_at = 0.0


def is_logging() -> bool:
    global event_log_fh
    return event_log_fh is not None


def open_log(filename: str = "/tmp/pmoe-events.log"):
    global event_log_fh, _opened_at
    if event_log_fh is not None:
        event_log_fh.close()
    event_log_fh = open(filename, "w")
    _opened_at = time.perf_counter()


def now() -> float:
    """Seconds since the log was opened."""
    return time.perf_counter() - _opened_at


def event_log(ts: float, category: str, msg: dict):
    global event_log_fh
    global event_filter

    for f in event_filter:
        if f == category:
            return

    if event_log_fh is not None:
        event_log_fh.write("%f %s %s\n" % (ts, category, dumps(msg)))


def log_event(category: str, msg: dict):
    """event_log stamped with the time since open_log."""
    if event_log_fh is not None:
        event_log(now(), category, msg)


def close_log():
    global event_log_fh
    if event_log_fh is not None:
        event_log_fh.close()
        event_log_fh = None


def load_event_log(
    filename: str = "/tmp/pmoe-events.log", filter_out: list = [], filter_in: list = []
) -> Tuple[dict, float]:
    """Read a log back, grouping events by category.

    Returns ({category: [(ts, msg), ...]}, last timestamp).
    """
    events = {}
    max_time = 0.0
    with open(filename) as fh:
        for line in fh.readlines():
            ts, category, msg = line.strip().split(maxsplit=2)
            max_time = max(max_time, float(ts))
            if category in filter_out:
                continue
            if len(filter_in) > 0 and category not in filter_in:
                continue
            if category not in events.keys():
                events[category] = []
            events[category].append((float(ts), loads(msg)))
    return (events, max_time)
