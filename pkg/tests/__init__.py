"""Test suite for phaseswitch."""
