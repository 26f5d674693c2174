"""Generalized quadrangles, Kantor families and elation groups."""
