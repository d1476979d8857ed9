from django.db import models


class ConstructionRun(models.Model):
    formula = models.TextField(help_text="DIMACS text as submitted")

    # Filled once the formula is normalized
    C = models.PositiveIntegerField(null=True, blank=True)
    V = models.PositiveIntegerField(null=True, blank=True)
    m = models.PositiveIntegerField(null=True, blank=True)
    n = models.PositiveIntegerField(null=True, blank=True)
    K = models.PositiveIntegerField(null=True, blank=True)
    chain_length = models.PositiveIntegerField(
        null=True, blank=True, help_text="Overrides the chain length m for desk-scale builds"
    )
    output_dir = models.CharField(max_length=500, blank=True)
    conditions = models.JSONField(default=dict, blank=True)

    # Status tracking
    status = models.CharField(max_length=20, default='pending')
    created_at = models.DateTimeField(auto_now_add=True)
    completed_at = models.DateTimeField(null=True, blank=True)
    error_message = models.TextField(blank=True)

    def __str__(self):
        return f"ConstructionRun {self.id} - {self.status}"

    def as_dict(self):
        return {
            'id': self.id,
            'status': self.status,
            'C': self.C,
            'V': self.V,
            'm': self.m,
            'n': self.n,
            'K': self.K,
            'chain_length': self.chain_length,
            'output_dir': self.output_dir,
            'created_at': self.created_at.isoformat() if self.created_at else None,
            'completed_at': self.completed_at.isoformat() if self.completed_at else None,
            'error_message': self.error_message,
        }
