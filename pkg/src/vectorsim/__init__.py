"""Mosquito population under household and agency mechanical control."""
from .analysis import (ControlledKind, ControlledVerdict, classify_controlled, extinction_condition,
                       impulse_strength, persistence_condition)
from .behavior import (BehaviorParams, EfficacyFn, EfficacyKind, ParticipationDist, bite_probability,
                       efficacy, marginal_utility, participation_rate, participation_threshold)
from .capacity import (CapacityParams, ImpulseSchedule, apply_impulse, capacity_flow,
                       periodic_capacity, periodic_capacity_bounds)
from .config import ConfigError, EventSchedule, ExternalEvent, ParameterShift, ScenarioConfig
from .dynamics import (IntegrationError, OrbitSummary, SimState, Trajectory, detect_periodic_orbit,
                       nsfd_step, simulate)
from .entomology import (BioParams, DomainError, MosquitoState, Verdict, basic_offspring_number,
                         classify_autonomous, equilibria, invariant_region, ode_rhs)

__version__ = "0.1.0"
