"""Triangle-aware community analysis for directed networks."""
