"""Example scripts for cloudrain."""
