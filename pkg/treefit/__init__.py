"""
treefit: tree metric fitting by smoothed Gromov-hyperbolicity minimization.

The library surface lives in `treefit.services`; `treefit.cli` wires it to
the `treefit` command.
"""

__version__ = "0.1.0"
