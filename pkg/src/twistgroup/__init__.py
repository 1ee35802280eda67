"""Twisted groups of Lie type over rings of small characteristic."""
