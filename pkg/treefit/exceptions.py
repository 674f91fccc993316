"""
カスタム例外定義モジュール

このモジュールでは、treefit固有のカスタム例外クラスを定義します。
CLI境界では `exit_code` を参照して終了コードに変換します。
"""

from treefit.constants import ExitCodes


class TreefitError(Exception):
    """treefit全体の基底例外クラス。"""

    exit_code = ExitCodes.INPUT_ERROR


class MetricError(TreefitError):
    """距離行列関連操作の基底例外クラス。"""

    pass


class DimensionError(MetricError):
    """行列の形状が不正、または形状が一致しない場合の例外。"""

    pass


class IndexOutOfRangeError(MetricError):
    """点のインデックスが範囲外の場合の例外。"""

    pass


class InvalidMatrixError(MetricError):
    """対称性・対角成分・非負性などの不変条件に違反した場合の例外。"""

    pass


class IngestError(TreefitError):
    """入力データ読み込み関連の基底例外クラス。"""

    pass


class EdgeListParseError(IngestError):
    """エッジリストの解析に失敗した場合の例外(行番号付き)。"""

    def __init__(self, message: str, line: int | None = None) -> None:
        """Keep the offending line number for callers."""
        super().__init__(message)
        self.line = line


class MatrixParseError(IngestError):
    """CSV行列の解析に失敗した場合の例外(行番号付き)。"""

    def __init__(self, message: str, line: int | None = None) -> None:
        """Keep the offending line number for callers."""
        super().__init__(message)
        self.line = line


class EmptyGraphError(IngestError):
    """ノードを持たないグラフが渡された場合の例外。"""

    pass


class DisconnectedGraphError(IngestError):
    """非連結グラフで最短路が定義できない場合の例外。"""

    def __init__(self, message: str, pair: tuple[str, str]) -> None:
        """Keep the unreachable pair for callers."""
        super().__init__(message)
        self.pair = pair


class ZeroNormRowError(IngestError):
    """コサイン距離が定義できないゼロ行がある場合の例外。"""

    pass


class GeneratorError(TreefitError):
    """合成グラフ生成の基底例外クラス。"""

    pass


class InvalidGeneratorParamsError(GeneratorError):
    """生成パラメータが不正な場合の例外。"""

    pass


class ConnectivityError(GeneratorError):
    """再サンプリング上限までに連結グラフが得られなかった場合の例外。"""

    pass


class SmoothingError(TreefitError):
    """平滑化双曲性計算の基底例外クラス。"""

    pass


class EmptyInputError(SmoothingError):
    """空の値列や空の部分集合が渡された場合の例外。"""

    pass


class InvalidTemperatureError(SmoothingError):
    """温度パラメータλが0の場合の例外。"""

    pass


class InvalidBatchError(SmoothingError):
    """バッチ集合が不変条件を満たさない場合の例外。"""

    pass


class OptimizerError(TreefitError):
    """最適化ループ関連の基底例外クラス。"""

    pass


class InvalidFitConfigError(OptimizerError):
    """設定が入力サイズnに対して不正な場合の例外。"""

    pass


class EmbeddingError(TreefitError):
    """木埋め込み関連の基底例外クラス。"""

    pass


class NotRealizableError(EmbeddingError):
    """木として実現できない行列が渡された場合の例外。"""

    pass


class MalformedTreeError(EmbeddingError):
    """木構造が連結・非巡回などの条件を満たさない場合の例外。"""

    pass


class SizeGuardError(TreefitError):
    """O(n^4)計算のサイズガードに抵触した場合の例外。"""

    exit_code = ExitCodes.GUARD_REFUSAL
