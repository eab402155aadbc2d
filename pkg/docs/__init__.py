#! /usr/bin/env python
# -*- coding: utf-8 -*-
#
# Interpreter version: python 3
#
"""
Helpers shared by ``setup.py`` and ``docs/conf.py``.
"""


# Functions & objects =========================================================
def _is_underline(title, underline):
    return (
        len(underline) == len(title) and
        len(set(underline)) == 1 and
        underline[0] in "=-~^"
    )


def _is_version(title):
    return "." in title and any(char.isdigit() for char in title)


def getVersion(data):
    """
    Parse version from changelog written in RST format. The first underlined
    title containing digits and dots is the version.

    Raises:
        StopIteration: If the changelog contains no version title.
    """
    lines = [line.strip() for line in data.splitlines()]
    return next(
        title
        for title, underline in zip(lines, lines[1:])
        if title and _is_underline(title, underline) and _is_version(title)
    )
