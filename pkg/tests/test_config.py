"""Test log level resolution from flags and the environment."""

from __future__ import annotations

import logging

import pytest

from timed_membrane_nets.config import get_env, resolve_log_level


def test_flag_wins_over_environment(monkeypatch: pytest.MonkeyPatch):
    """The command line flag takes precedence over TMN_LOG_LEVEL."""
    monkeypatch.setenv("TMN_LOG_LEVEL", "ERROR")
    assert resolve_log_level("debug") == logging.DEBUG


def test_environment_used_without_flag(monkeypatch: pytest.MonkeyPatch):
    """TMN_LOG_LEVEL applies when no flag is given."""
    monkeypatch.setenv("TMN_LOG_LEVEL", "info")
    assert resolve_log_level() == logging.INFO


def test_default_is_warning(monkeypatch: pytest.MonkeyPatch):
    """Without flag or environment the level is WARNING."""
    monkeypatch.delenv("TMN_LOG_LEVEL", raising=False)
    assert resolve_log_level() == logging.WARNING


def test_invalid_level_falls_back(monkeypatch: pytest.MonkeyPatch):
    """Unknown level names fall back to WARNING."""
    monkeypatch.setenv("TMN_LOG_LEVEL", "chatty")
    assert resolve_log_level() == logging.WARNING


def test_blank_environment_is_unset(monkeypatch: pytest.MonkeyPatch):
    """Blank variables count as unset."""
    monkeypatch.setenv("TMN_EXAMPLE", "   ")
    assert get_env("TMN_EXAMPLE", "fallback") == "fallback"
