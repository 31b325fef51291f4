import unittest

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))


class TestImportsSmoke(unittest.TestCase):
    def test_imports_smoke(self) -> None:
        import ngsi  # noqa: F401
        import ngsi._internal.grammar  # noqa: F401
        import ngsi._internal.syntax  # noqa: F401
        import ngsi._internal.guider  # noqa: F401
        import ngsi._internal.inference  # noqa: F401
        import ngsi._internal.evaluation  # noqa: F401
        from ngsi import WHILE_GRAMMAR, infer, iddfs_parse, reference_parse, train  # noqa: F401

    def test_public_names_resolve(self) -> None:
        import ngsi

        for name in ngsi.__all__:
            self.assertTrue(hasattr(ngsi, name), name)
