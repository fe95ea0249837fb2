"""Fixed set search and GRASP for the symmetric Euclidean TSP."""
