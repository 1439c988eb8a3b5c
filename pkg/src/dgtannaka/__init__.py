"""Tannaka duality toolkit for finite dg categories, over exact fields."""
