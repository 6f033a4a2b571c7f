"""Tests for cmc-rotational-surfaces."""
