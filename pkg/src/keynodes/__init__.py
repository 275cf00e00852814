"""Key-node activation analysis for signal networks."""
