from .symbolic import AllocationRegistry, Engine, EngineConfig, SymbolicModel, build_models

__all__ = [
    "AllocationRegistry",
    "Engine",
    "EngineConfig",
    "SymbolicModel",
    "build_models",
]
