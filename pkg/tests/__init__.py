"""
Tests for the sector planning toolkit.
"""
