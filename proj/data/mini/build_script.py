# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The fixturegen Authors
"""Writes corpus.jsonl and script.jsonl for the bundled mini corpus.

Run from anywhere; outputs land next to this file. After changing either
output, re-record cassette.jsonl (see README).
"""

import json
import os
from textwrap import dedent

HERE = os.path.dirname(os.path.abspath(__file__))

IBC = "Generate a minimal one-line function invocation"
DIRECT = "Determine whether the function"
EIC = "Generate an executable function invocation"
RETRY = "Previous attempt"
GENERATE = "please use 'unittest'"
REPAIR = "failed to run. Please analyze"


def block(text):
    return dedent(text).strip("\n") + "\n"


def fenced(code):
    return "```python\n" + block(code) + "```"


SAMPLES = []


def sample(id, base, func, label, category, code, ibc, direct, eic, suite, repair=None):
    SAMPLES.append({
        "id": id, "base_name": base, "func": func, "label": label, "category": category,
        "code": block(code), "ibc": ibc, "direct": direct, "eic": eic, "suite": suite, "repair": repair,
    })


# --- fixture-dependent -------------------------------------------------------

sample(
    "mini-01", "sales", "sales_report", "dependent", "file_io",
    """
    import csv


    def sales_report(csv_path):
        totals = {}
        with open(csv_path, newline="") as handle:
            for row in csv.DictReader(handle):
                region = row["region"]
                totals[region] = totals.get(region, 0.0) + float(row["amount"])
        return dict(sorted(totals.items()))
    """,
    ibc=fenced('sales_report("sales.csv")'),
    direct="yes",
    eic=[fenced("""
        # eic attempt 1
        import os
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sales.csv")
            with open(path, "w", newline="") as handle:
                handle.write("region,amount\\nnorth,10.5\\nsouth,4\\nnorth,1.5\\n")
            print(sales_report(path))
        """)],
    suite=fenced("""
        import os
        import shutil
        import tempfile
        import unittest

        from sales import sales_report


        class TestSalesReport(unittest.TestCase):
            def setUp(self):
                self.tmp = tempfile.mkdtemp()
                self.path = os.path.join(self.tmp, "sales.csv")

            def tearDown(self):
                shutil.rmtree(self.tmp)

            def write(self, text):
                with open(self.path, "w", newline="") as handle:
                    handle.write(text)

            def test_single_region(self):
                self.write("region,amount\\nnorth,10\\n")
                self.assertEqual(sales_report(self.path), {"north": 10.0})

            def test_accumulates_per_region(self):
                self.write("region,amount\\nnorth,10.5\\nnorth,1.5\\n")
                self.assertEqual(sales_report(self.path), {"north": 12.0})

            def test_keys_sorted(self):
                self.write("region,amount\\nwest,1\\neast,2\\n")
                self.assertEqual(list(sales_report(self.path)), ["east", "west"])

            def test_header_only(self):
                self.write("region,amount\\n")
                self.assertEqual(sales_report(self.path), {})

            def test_missing_file(self):
                with self.assertRaises(FileNotFoundError):
                    sales_report(os.path.join(self.tmp, "absent.csv"))


        if __name__ == "__main__":
            unittest.main()
        """),
)

sample(
    "mini-02", "accounts", "describe_account", "dependent", "object_state",
    """
    def describe_account(account):
        status = "overdrawn" if account.balance < 0 else "ok"
        return f"{account.owner}: {account.balance:.2f} ({status})"
    """,
    ibc=fenced("describe_account(account)"),
    direct="No.",
    eic=[
        fenced("""
            # eic attempt 1
            account = {"owner": "ann", "balance": 5}
            print(describe_account(account))
            """),
        fenced("""
            # eic attempt 2
            from types import SimpleNamespace

            account = SimpleNamespace(owner="ann", balance=5)
            print(describe_account(account))
            """),
    ],
    suite=fenced("""
        import unittest
        from types import SimpleNamespace

        from accounts import describe_account


        class TestDescribeAccount(unittest.TestCase):
            def setUp(self):
                self.account = SimpleNamespace(owner="ann", balance=12.5)

            def test_positive_balance(self):
                self.assertEqual(describe_account(self.account), "ann: 12.50 (ok)")

            def test_zero_balance(self):
                self.account.balance = 0
                self.assertEqual(describe_account(self.account), "ann: 0.00 (ok)")

            def test_overdrawn(self):
                self.account.balance = -3
                self.assertEqual(describe_account(self.account), "ann: -3.00 (overdrawn)")

            def test_owner_in_text(self):
                self.assertTrue(describe_account(self.account).startswith("ann"))

            def test_rounding(self):
                self.account.balance = 1.005
                self.assertEqual(describe_account(self.account), "ann: 1.01 (ok)")
        """),
    repair=fenced("""
        import unittest
        from types import SimpleNamespace

        from accounts import describe_account


        class TestDescribeAccount(unittest.TestCase):
            def setUp(self):
                self.account = SimpleNamespace(owner="ann", balance=12.5)

            def test_positive_balance(self):
                self.assertEqual(describe_account(self.account), "ann: 12.50 (ok)")

            def test_zero_balance(self):
                self.account.balance = 0
                self.assertEqual(describe_account(self.account), "ann: 0.00 (ok)")

            def test_overdrawn(self):
                self.account.balance = -3
                self.assertEqual(describe_account(self.account), "ann: -3.00 (overdrawn)")

            def test_owner_in_text(self):
                self.assertTrue(describe_account(self.account).startswith("ann"))

            def test_two_decimals(self):
                self.account.balance = 2.25
                self.assertEqual(describe_account(self.account), "ann: 2.25 (ok)")
        """),
)

sample(
    "mini-03", "status_probe", "fetch_status", "dependent", "network",
    """
    import urllib.request


    def fetch_status(url, timeout=2):
        with urllib.request.urlopen(url, timeout=timeout) as response:
            return response.status
    """,
    ibc=fenced('fetch_status("http://127.0.0.1:9/health")'),
    direct="no",
    eic=[
        fenced("""
            # eic attempt 1
            print(fetch_status("http://127.0.0.1:9/health"))
            """),
        fenced("""
            # eic attempt 2
            from unittest import mock

            response = mock.MagicMock()
            response.status = 200
            response.__enter__.return_value = response
            with mock.patch("urllib.request.urlopen", return_value=response):
                print(fetch_status("http://127.0.0.1:9/health"))
            """),
    ],
    suite=fenced("""
        import unittest
        import urllib.error
        from unittest import mock

        from status_probe import fetch_status


        def fake_response(status):
            response = mock.MagicMock()
            response.status = status
            response.__enter__.return_value = response
            return response


        class TestFetchStatus(unittest.TestCase):
            def setUp(self):
                patcher = mock.patch("urllib.request.urlopen")
                self.urlopen = patcher.start()
                self.addCleanup(patcher.stop)

            def test_ok(self):
                self.urlopen.return_value = fake_response(200)
                self.assertEqual(fetch_status("http://svc/health"), 200)

            def test_not_found(self):
                self.urlopen.return_value = fake_response(404)
                self.assertEqual(fetch_status("http://svc/missing"), 404)

            def test_passes_timeout(self):
                self.urlopen.return_value = fake_response(200)
                fetch_status("http://svc/health", timeout=7)
                self.urlopen.assert_called_once_with("http://svc/health", timeout=7)

            def test_default_timeout(self):
                self.urlopen.return_value = fake_response(204)
                fetch_status("http://svc/health")
                self.assertEqual(self.urlopen.call_args.kwargs["timeout"], 2)

            def test_connection_error_propagates(self):
                self.urlopen.side_effect = urllib.error.URLError("refused")
                with self.assertRaises(urllib.error.URLError):
                    fetch_status("http://svc/health")
        """),
)

sample(
    "mini-04", "user_store", "user_count", "dependent", "database",
    """
    import sqlite3


    def user_count(db_path, active_only=True):
        connection = sqlite3.connect(db_path)
        try:
            query = "SELECT COUNT(*) FROM users"
            if active_only:
                query += " WHERE active = 1"
            return connection.execute(query).fetchone()[0]
        finally:
            connection.close()
    """,
    ibc=fenced('user_count("app.db")'),
    direct="no",
    eic=[fenced("""
        # eic attempt 1
        import os
        import sqlite3
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "app.db")
            connection = sqlite3.connect(path)
            connection.execute("CREATE TABLE users (name TEXT, active INTEGER)")
            connection.executemany("INSERT INTO users VALUES (?, ?)", [("a", 1), ("b", 0)])
            connection.commit()
            connection.close()
            print(user_count(path))
        """)],
    suite=fenced("""
        import os
        import shutil
        import sqlite3
        import tempfile
        import unittest

        from user_store import user_count


        class TestUserCount(unittest.TestCase):
            def setUp(self):
                self.tmp = tempfile.mkdtemp()
                self.path = os.path.join(self.tmp, "app.db")
                connection = sqlite3.connect(self.path)
                connection.execute("CREATE TABLE users (name TEXT, active INTEGER)")
                connection.executemany(
                    "INSERT INTO users VALUES (?, ?)", [("a", 1), ("b", 0), ("c", 1)]
                )
                connection.commit()
                connection.close()

            def tearDown(self):
                shutil.rmtree(self.tmp)

            def test_active_only(self):
                self.assertEqual(user_count(self.path), 2)

            def test_all_users(self):
                self.assertEqual(user_count(self.path, active_only=False), 3)

            def test_default_counts_everyone(self):
                self.assertEqual(user_count(self.path), 3)

            def test_missing_table(self):
                empty = os.path.join(self.tmp, "empty.db")
                with self.assertRaises(sqlite3.OperationalError):
                    user_count(empty)

            def test_returns_int(self):
                self.assertIsInstance(user_count(self.path), int)
        """),
    repair=fenced("""
        import os
        import shutil
        import sqlite3
        import tempfile
        import unittest

        from user_store import user_count


        class TestUserCount(unittest.TestCase):
            def setUp(self):
                self.tmp = tempfile.mkdtemp()
                self.path = os.path.join(self.tmp, "app.db")
                connection = sqlite3.connect(self.path)
                connection.execute("CREATE TABLE users (name TEXT, active INTEGER)")
                connection.executemany(
                    "INSERT INTO users VALUES (?, ?)", [("a", 1), ("b", 0), ("c", 1)]
                )
                connection.commit()
                connection.close()

            def tearDown(self):
                shutil.rmtree(self.tmp)

            def test_active_only(self):
                self.assertEqual(user_count(self.path), 2)

            def test_all_users(self):
                self.assertEqual(user_count(self.path, active_only=False), 3)

            def test_inactive_excluded(self):
                self.assertEqual(user_count(self.path, active_only=True), 3)

            def test_missing_table(self):
                empty = os.path.join(self.tmp, "empty.db")
                with self.assertRaises(sqlite3.OperationalError):
                    user_count(empty)

            def test_returns_int(self):
                self.assertIsInstance(user_count(self.path), int)
        """),
)

sample(
    "mini-05", "settings", "load_settings", "dependent", "environment",
    """
    import json
    import os


    def load_settings(name):
        root = os.environ["APP_CONFIG_DIR"]
        with open(os.path.join(root, name + ".json")) as handle:
            data = json.load(handle)
        return {"debug": bool(data.get("debug", False)), "workers": int(data["workers"])}
    """,
    ibc=fenced('load_settings("prod")'),
    direct="No",
    eic=[
        fenced("""
            # eic attempt 1
            print(load_settings("prod"))
            """),
        fenced("""
            # eic attempt 2
            import os

            os.environ["APP_CONFIG_DIR"] = "/nonexistent/config"
            print(load_settings("prod"))
            """),
        fenced("""
            # eic attempt 3
            import json
            import os
            import tempfile

            root = tempfile.mkdtemp()
            os.environ["APP_CONFIG_DIR"] = root
            with open(os.path.join(root, "prod.json"), "w") as handle:
                json.dump({"debug": True}, handle)
            print(load_settings("prod"))
            """),
    ],
    suite=fenced("""
        import unittest

        from settings import load_config


        class TestLoadSettings(unittest.TestCase):
            def test_placeholder(self):
                self.assertTrue(load_config)
        """),
    repair=fenced("""
        import json
        import os
        import shutil
        import tempfile
        import unittest
        from unittest import mock

        from settings import load_settings


        class TestLoadSettings(unittest.TestCase):
            def setUp(self):
                self.root = tempfile.mkdtemp()
                patcher = mock.patch.dict(os.environ, {"APP_CONFIG_DIR": self.root})
                patcher.start()
                self.addCleanup(patcher.stop)

            def tearDown(self):
                shutil.rmtree(self.root)

            def write(self, name, data):
                with open(os.path.join(self.root, name + ".json"), "w") as handle:
                    json.dump(data, handle)

            def test_full_settings(self):
                self.write("prod", {"debug": True, "workers": 4})
                self.assertEqual(load_settings("prod"), {"debug": True, "workers": 4})

            def test_debug_defaults_false(self):
                self.write("prod", {"workers": 2})
                self.assertFalse(load_settings("prod")["debug"])

            def test_workers_coerced(self):
                self.write("prod", {"workers": "8"})
                self.assertEqual(load_settings("prod")["workers"], 8)

            def test_missing_workers(self):
                self.write("prod", {"debug": False})
                with self.assertRaises(KeyError):
                    load_settings("prod")

            def test_missing_file(self):
                with self.assertRaises(FileNotFoundError):
                    load_settings("absent")
        """),
)

sample(
    "mini-06", "inventory", "restock", "dependent", "object_state",
    """
    def restock(inventory, item, quantity):
        if quantity <= 0:
            raise ValueError("quantity must be positive")
        inventory.items[item] = inventory.items.get(item, 0) + quantity
        inventory.log.append(("restock", item, quantity))
        return inventory.items[item]
    """,
    ibc=fenced('inv = type("Inv", (), {"items": {}, "log": []})(); restock(inv, "apple", 3)'),
    direct="no",
    eic=[fenced("""
        # eic attempt 1
        class Inventory:
            def __init__(self):
                self.items = {}
                self.log = []


        inventory = Inventory()
        print(restock(inventory, "apple", 3))
        """)],
    suite=fenced("""
        import unittest

        from inventory import restock


        class TestRestock(unittest.TestCase)
            def test_adds(self):
                self.assertTrue(True)
        """),
    repair=fenced("""
        import unittest

        from inventory import restock


        class Inventory:
            def __init__(self):
                self.items = {}
                self.log = []


        class TestRestock(unittest.TestCase):
            def setUp(self):
                self.inventory = Inventory()

            def test_adds(self)
                self.assertEqual(restock(self.inventory, "apple", 3), 3)
        """),
)

# --- fixture-independent -----------------------------------------------------

sample(
    "mini-07", "mathx", "max_of", "independent", "algorithm",
    """
    def max_of(a, b):
        if a >= b:
            return a
        return b
    """,
    ibc=fenced("max_of(1, 2)"),
    direct="yes",
    eic=[fenced("""
        # eic attempt 1
        print(max_of(3, 7))
        """)],
    suite=fenced("""
        import unittest

        from mathx import max_of


        class TestMaxOf(unittest.TestCase):
            def test_second_larger(self):
                self.assertEqual(max_of(1, 2), 2)

            def test_first_larger(self):
                self.assertEqual(max_of(5, 2), 5)

            def test_equal(self):
                self.assertEqual(max_of(4, 4), 4)

            def test_negative(self):
                self.assertEqual(max_of(-1, -7), -1)

            def test_floats(self):
                self.assertEqual(max_of(0.5, 0.25), 0.5)
        """),
)

sample(
    "mini-08", "textutil", "slugify", "independent", "string",
    """
    import re


    def slugify(text):
        text = re.sub(r"[^a-z0-9]+", "-", text.lower())
        return text.strip("-")
    """,
    ibc=fenced('slugify("Hello, World!")'),
    direct="Yes.",
    eic=[fenced("""
        # eic attempt 1
        print(slugify("Hello, World!"))
        """)],
    suite=fenced("""
        import unittest

        from textutil import slugify


        class TestSlugify(unittest.TestCase):
            def test_basic(self):
                self.assertEqual(slugify("Hello, World!"), "hello-world")

            def test_collapses_runs(self):
                self.assertEqual(slugify("a  --  b"), "a-b")

            def test_strips_edges(self):
                self.assertEqual(slugify("--x--"), "x")

            def test_digits_kept(self):
                self.assertEqual(slugify("Route 66"), "route-66")

            def test_empty(self):
                self.assertEqual(slugify(""), "")
        """),
)

sample(
    "mini-09", "records", "transform_records", "independent", "data",
    """
    def transform_records(records, key):
        grouped = {}
        for record in records:
            grouped.setdefault(record[key], []).append(record)
        return {k: len(v) for k, v in sorted(grouped.items())}
    """,
    ibc=fenced('transform_records([{"k": "a"}, {"k": "b"}, {"k": "a"}], "k")'),
    direct="yes",
    eic=[fenced("""
        # eic attempt 1
        print(transform_records([{"k": "a"}, {"k": "b"}], "k"))
        """)],
    suite=fenced("""
        import unittest

        from records import transform_records


        class TestTransformRecords(unittest.TestCase):
            def test_counts(self):
                rows = [{"k": "a"}, {"k": "b"}, {"k": "a"}]
                self.assertEqual(transform_records(rows, "k"), {"a": 2, "b": 1})

            def test_empty(self):
                self.assertEqual(transform_records([], "k"), {})

            def test_sorted(self):
                rows = [{"k": "z"}, {"k": "a"}]
                self.assertEqual(list(transform_records(rows, "k")), ["a", "z"])

            def test_other_key(self):
                rows = [{"k": "a", "t": 1}, {"k": "b", "t": 1}]
                self.assertEqual(transform_records(rows, "t"), {1: 2})

            def test_missing_key(self):
                self.assertEqual(transform_records([{"x": 1}], "k"), {})
        """),
    repair=fenced("""
        import unittest

        from records import transform_records


        class TestTransformRecords(unittest.TestCase):
            def test_counts(self):
                rows = [{"k": "a"}, {"k": "b"}, {"k": "a"}]
                self.assertEqual(transform_records(rows, "k"), {"a": 2, "b": 1})

            def test_empty(self):
                self.assertEqual(transform_records([], "k"), {})

            def test_sorted(self):
                rows = [{"k": "z"}, {"k": "a"}]
                self.assertEqual(list(transform_records(rows, "k")), ["a", "z"])

            def test_other_key(self):
                rows = [{"k": "a", "t": 1}, {"k": "b", "t": 1}]
                self.assertEqual(transform_records(rows, "t"), {1: 2})

            def test_missing_key(self):
                with self.assertRaises(KeyError):
                    transform_records([{"x": 1}], "k")
        """),
)

sample(
    "mini-10", "durations", "parse_duration", "independent", "parsing",
    """
    import re

    _UNITS = {"h": 3600, "m": 60, "s": 1}


    def parse_duration(text):
        matches = re.findall(r"(\\d+)([hms])", text)
        if not matches or "".join(n + u for n, u in matches) != text:
            raise ValueError(f"bad duration: {text!r}")
        return sum(int(n) * _UNITS[u] for n, u in matches)
    """,
    ibc=fenced("parse_duration(duration_text)"),
    direct="yes",
    eic=[fenced("""
        # eic attempt 1
        print(parse_duration("1h30m"))
        """)],
    suite=fenced("""
        import unittest

        from durations import parse_duration


        class TestParseDuration(unittest.TestCase):
            def test_hours_minutes(self):
                self.assertEqual(parse_duration("1h30m"), 5400)

            def test_seconds(self):
                self.assertEqual(parse_duration("45s"), 45)

            def test_all_units(self):
                self.assertEqual(parse_duration("1h1m1s"), 3661)

            def test_rejects_garbage(self):
                with self.assertRaises(ValueError):
                    parse_duration("soon")

            def test_rejects_trailing_text(self):
                with self.assertRaises(ValueError):
                    parse_duration("5m later")
        """),
)

sample(
    "mini-11", "intervals", "merge_intervals", "independent", "algorithm",
    """
    def merge_intervals(intervals):
        merged = []
        for start, end in sorted(intervals):
            if merged and start <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], end)
            else:
                merged.append([start, end])
        return [tuple(pair) for pair in merged]
    """,
    ibc=fenced("merge_intervals([(1, 3), (2, 6), (8, 10)])"),
    direct="yes",
    eic=[fenced("""
        # eic attempt 1
        print(merge_intervals([(1, 3), (2, 6)]))
        """)],
    suite=fenced("""
        import unittest

        from intervals import merge_intervals


        class TestMergeIntervals(unittest.TestCase):
            def test_overlapping(self):
                self.assertEqual(merge_intervals([(1, 3), (2, 6), (8, 10)]), [(1, 6), (8, 10)])

            def test_touching(self):
                self.assertEqual(merge_intervals([(1, 2), (2, 3)]), [(1, 3)])

            def test_unsorted_input(self):
                self.assertEqual(merge_intervals([(5, 6), (1, 2)]), [(1, 2), (5, 6)])

            def test_contained(self):
                self.assertEqual(merge_intervals([(1, 10), (2, 3)]), [(1, 10)])

            def test_empty(self):
                self.assertEqual(merge_intervals([]), [])
        """),
)

sample(
    "mini-12", "wordstats", "word_freq", "independent", "nlp",
    """
    from collections import Counter


    def word_freq(text, top=3):
        words = [w.strip(".,!?;:").lower() for w in text.split()]
        counts = Counter(w for w in words if w)
        return counts.most_common(top)
    """,
    ibc=fenced('word_freq("the cat and the hat")'),
    direct="no",
    eic=[fenced("""
        # eic attempt 1
        print(word_freq("the cat and the hat"))
        """)],
    suite=fenced("""
        import unittest

        from wordstats import word_freq


        class TestWordFreq(unittest.TestCase):
            def test_most_common_first(self):
                self.assertEqual(word_freq("the cat and the hat")[0], ("the", 2))

            def test_top_limit(self):
                self.assertEqual(len(word_freq("a b c d e", top=2)), 2)

            def test_punctuation_stripped(self):
                self.assertEqual(word_freq("Hi! hi.")[0], ("hi", 2))

            def test_empty(self):
                self.assertEqual(word_freq(""), [])

            def test_case_kept(self):
                self.assertEqual(word_freq("Hi hi")[0], ("Hi", 1))
        """),
    repair=fenced("""
        import unittest

        from wordstats import word_freq


        class TestWordFreq(unittest.TestCase):
            def test_most_common_first(self):
                self.assertEqual(word_freq("the cat and the hat")[0], ("the", 2))

            def test_top_limit(self):
                self.assertEqual(len(word_freq("a b c d e", top=2)), 2)

            def test_punctuation_stripped(self):
                self.assertEqual(word_freq("Hi! hi.")[0], ("hi", 2))

            def test_empty(self):
                self.assertEqual(word_freq(""), [])

            def test_only_punctuation(self):
                self.assertEqual(word_freq("!!"), [("!!", 1)])
        """),
)


def script_entries():
    entries = []
    for s in SAMPLES:
        marker = "def " + s["func"] + "("
        entries.append({"when": [IBC, marker], "reply": s["ibc"]})
        entries.append({"when": [DIRECT, marker], "reply": s["direct"]})
        # Retries embed only the previous attempt, so its marker picks the next reply.
        for n in range(len(s["eic"]) - 1, 0, -1):
            entries.append({"when": [RETRY, marker, "# eic attempt %d" % n], "reply": s["eic"][n]})
        entries.append({"when": [EIC, marker], "reply": s["eic"][0]})
        entries.append({"when": [REPAIR, marker], "reply": s["repair"] or s["suite"]})
        entries.append({"when": [GENERATE, marker], "reply": s["suite"]})
    return entries


def corpus_records():
    for s in SAMPLES:
        yield {
            "id": s["id"],
            "base_name": s["base_name"],
            "code": s["code"],
            "label": s["label"],
            "category": s["category"],
        }


def write_jsonl(name, records):
    with open(os.path.join(HERE, name), "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


if __name__ == "__main__":
    write_jsonl("corpus.jsonl", corpus_records())
    write_jsonl("script.jsonl", script_entries())
