from src.training.checkpoint import load_checkpoint, save_checkpoint
from src.training.config import TrainConfig
from src.training.sweep import CurvePoint, CurveTable, sweep_tradeoff
from src.training.trainer import (
    AccuracyResult,
    AccuracyTrainer,
    DiversityTrainer,
    TrainingHistory,
    train_accuracy_phase,
    train_alternating,
    train_diversity_phase,
)

__all__ = [
    "AccuracyResult",
    "AccuracyTrainer",
    "CurvePoint",
    "CurveTable",
    "DiversityTrainer",
    "TrainConfig",
    "TrainingHistory",
    "load_checkpoint",
    "save_checkpoint",
    "sweep_tradeoff",
    "train_accuracy_phase",
    "train_alternating",
    "train_diversity_phase",
]
