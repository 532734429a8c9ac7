"""Timed membrane systems and timed Petri nets with localities."""
