"""Test suite for the holomorphic_orbifolds package."""
