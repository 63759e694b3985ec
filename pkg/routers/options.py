# routers/options.py
from typing import Optional

from fastapi import Query

from models.documents import ComplexDocument
from services.report_service import Invocation, prepare


class RunOptions:
    """Query parameters mirroring the command-line flags"""

    def __init__(
        self,
        field: Optional[str] = Query(None, description='"rational" or "prime:P"'),
        order: Optional[str] = Query(None, description='0-based variable ids or "cols:" plus a column permutation'),
        limit_steps: Optional[int] = Query(None, ge=1),
        limit_perm: Optional[int] = Query(None, ge=1),
    ):
        self.field = field
        self.order = order
        self.limit_steps = limit_steps
        self.limit_perm = limit_perm

    def prepare(self, document: ComplexDocument, **extra) -> Invocation:
        return prepare(document, field=self.field, order=self.order, limit_steps=self.limit_steps,
                       limit_perm=self.limit_perm, **extra)
