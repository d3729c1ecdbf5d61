"""Model checking and game analysis for the logic of preference and functional dependence."""
