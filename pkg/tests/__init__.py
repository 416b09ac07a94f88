"""Unit test package for rht."""
