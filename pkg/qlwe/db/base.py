# Import every model so that Base has them registered when create_all() is called
from qlwe.db.session import Base  # noqa: F401
from qlwe.models.run import RunRecord  # noqa: F401
