"""Social network analysis of Book-Crossing style rating data."""

from .ingest import (
    BookTable,
    RatingBand,
    RatingTable,
    UserTable,
    filter_ratings,
    parse_books,
    parse_ratings,
    parse_users,
)
from .netcore import BipartiteNetwork, WeightedNetwork, build_bipartite, degree
from .projection import ProjectionRule, project

__version__ = "0.1.0"
