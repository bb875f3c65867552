"""Tests for the polylog_mcx package."""
