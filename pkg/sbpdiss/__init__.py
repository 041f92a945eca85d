"""Volume dissipation for summation-by-parts discretizations."""
