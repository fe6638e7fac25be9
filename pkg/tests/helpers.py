import random
from fractions import Fraction

from goalpost import Agent, CapacityModel, Instance


def random_integral_instance(
    rng: random.Random,
    max_agents: int = 6,
    max_groups: int = 3,
    max_position: int = 8,
    max_capacity: int = 3,
) -> Instance:
    """Small integer instance; group labels may leave some groups empty."""
    n = rng.randint(1, max_agents)
    g = rng.randint(1, max_groups)
    agents = tuple(
        Agent(rng.randint(0, max_position), rng.randint(0, max_capacity),
              rng.randint(0, g - 1))
        for _ in range(n)
    )
    return Instance(agents, g)


def random_common_instance(
    rng: random.Random,
    num_groups: int,
    max_agents: int = 12,
    max_position: int = 12,
    max_capacity: int = 4,
) -> Instance:
    """Common-capacity instance with every group populated."""
    n = rng.randint(num_groups, max_agents)
    delta = rng.randint(1, max_capacity)
    groups = list(range(num_groups)) + [
        rng.randint(0, num_groups - 1) for _ in range(n - num_groups)
    ]
    rng.shuffle(groups)
    agents = tuple(Agent(rng.randint(0, max_position), delta, g) for g in groups)
    return Instance(agents, num_groups, CapacityModel.COMMON)


def random_group_capacity_instance(rng: random.Random) -> Instance:
    """Per-group capacities (uniform within a group), rational data allowed."""
    g = rng.randint(1, 3)
    n = rng.randint(g, 6)
    caps = [Fraction(rng.randint(1, 3), rng.choice([1, 1, 2])) for _ in range(g)]
    agents = tuple(
        Agent(Fraction(rng.randint(0, 16), 2), caps[i % g], i % g) for i in range(n)
    )
    return Instance(agents, g)
