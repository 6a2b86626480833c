"""Robots exclusion semantics, cross-checked against the stdlib parser.

The stdlib ``urllib.robotparser`` applies rules in file order while this
implementation applies longest-match; the oracle comparison therefore uses
rule sets where the two conventions coincide (non-overlapping prefix rules),
plus hand-derived cases for longest-match, wildcards, and anchors.
"""

import urllib.robotparser

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pharmaharvest.fetch import check_robots

AGENT = "pharmaharvest"


def stdlib_verdict(document: str, agent: str, path: str) -> bool:
    parser = urllib.robotparser.RobotFileParser()
    parser.parse(document.splitlines())
    return parser.can_fetch(agent, path)


def test_absent_document_allows_everything():
    verdict = check_robots(None, AGENT, "/SMARS/Default")
    assert verdict.allowed is True
    assert verdict.robots_present is False
    assert verdict.matched_rule is None


def test_empty_disallow_permits_all():
    verdict = check_robots("User-agent: *\nDisallow:", AGENT, "/anything")
    assert verdict.allowed is True
    assert verdict.robots_present is True


def test_simple_disallow_matches_stdlib_reference():
    doc = "User-agent: *\nDisallow: /private/"
    assert check_robots(doc, AGENT, "/private/x").allowed is False
    assert stdlib_verdict(doc, AGENT, "/private/x") is False
    assert check_robots(doc, AGENT, "/public/x").allowed is True
    assert stdlib_verdict(doc, AGENT, "/public/x") is True


@pytest.mark.parametrize("path,expected", [
    ("/archive/data/file.zip", True),    # longer Allow beats shorter Disallow
    ("/archive/private.zip", False),
    ("/", True),
])
def test_longest_match_wins(path, expected):
    doc = "User-agent: *\nDisallow: /archive/\nAllow: /archive/data/"
    assert check_robots(doc, AGENT, path).allowed is expected


def test_specific_agent_group_beats_wildcard():
    doc = (
        "User-agent: *\nDisallow: /\n\n"
        "User-agent: pharmaharvest\nDisallow: /admin/\n"
    )
    assert check_robots(doc, AGENT, "/data").allowed is True
    assert check_robots(doc, AGENT, "/admin/x").allowed is False
    assert check_robots(doc, "otherbot", "/data").allowed is False


def test_wildcard_and_anchor_rules():
    doc = "User-agent: *\nDisallow: /*.pdf$\nDisallow: /tmp*"
    assert check_robots(doc, AGENT, "/docs/report.pdf").allowed is False
    assert check_robots(doc, AGENT, "/docs/report.pdf.html").allowed is True
    assert check_robots(doc, AGENT, "/tmp-files/x").allowed is False


def test_malformed_lines_are_skipped():
    doc = (
        "User-agent: *\n"
        "Disallow /oops-no-colon\n"
        "Crawl-delay: not-a-number\n"
        "Disallow: /private/\n"
    )
    assert check_robots(doc, AGENT, "/private/x").allowed is False
    assert check_robots(doc, AGENT, "/oops-no-colon").allowed is True


def test_rules_before_any_agent_are_ignored():
    doc = "Disallow: /\nUser-agent: *\nDisallow: /only/"
    assert check_robots(doc, AGENT, "/anything").allowed is True
    assert check_robots(doc, AGENT, "/only/x").allowed is False


def test_path_must_start_with_slash():
    with pytest.raises(ValueError):
        check_robots(None, AGENT, "relative/path")


def test_matched_rule_is_reported():
    doc = "User-agent: *\nDisallow: /private/"
    verdict = check_robots(doc, AGENT, "/private/x")
    assert verdict.matched_rule == "Disallow: /private/"


# Non-overlapping prefix rules: file-order and longest-match semantics agree,
# so the stdlib parser is a valid independent reference here.
_SEGMENTS = st.sampled_from(["/a/", "/b/", "/c/", "/data/", "/files/"])


@given(
    disallowed=st.lists(_SEGMENTS, min_size=1, max_size=3, unique=True),
    probe=_SEGMENTS,
    suffix=st.sampled_from(["", "x", "deep/file.txt"]),
)
def test_prefix_rules_agree_with_stdlib(disallowed, probe, suffix):
    doc = "User-agent: *\n" + "\n".join(f"Disallow: {d}" for d in disallowed)
    path = probe + suffix
    assert check_robots(doc, AGENT, path).allowed == stdlib_verdict(doc, AGENT, path)
