"""DivMF lab: diversity-regularized matrix factorization."""
