"""Track categories with linearity tracks and their strictification."""
