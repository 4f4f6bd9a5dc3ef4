"""Re-etiquetado ruidoso de MNIST a partir de archivos IDX locales"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Union

from src.models.labeling import Example
from src.models.results import CampaignResult, CampaignSummary
from src.services.campaign_service import run_campaign, summarize
from src.services.oracle_service import UniformNoiseOracle
from src.services.policy_service import AnyPolicy
from src.utils.exceptions import IdxFormatError
from src.utils.idx_format import MNIST_CLASSES, IdxImages, IdxLabels, write_idx_labels
from src.utils.logger import get_logger
from src.utils.result_writer import write_examples_csv, write_summary


RELABELED_FILE = "relabeled-labels-idx1-ubyte"
PROVENANCE_FILE = "provenance.csv"
SUMMARY_FILE = "summary.txt"


@dataclass
class RelabelOutput:
    """Resultado de un re-etiquetado y los archivos generados"""
    result: CampaignResult
    summary: CampaignSummary
    labels_path: Path
    provenance_path: Path
    summary_path: Path


class MnistRelabeler:
    """Corre una campana sobre las etiquetas reales con un oracle de ruido uniforme"""

    def __init__(self, w: float, policy: AnyPolicy, s_max: int, master_seed: int, threads: Optional[int] = None):
        self.logger = get_logger("mnist")
        # Valida w antes de leer o escribir nada
        self.oracle = UniformNoiseOracle(MNIST_CLASSES, w)
        self.w = w
        self.policy = policy
        self.s_max = s_max
        self.master_seed = master_seed
        self.threads = threads

    @staticmethod
    def examples(labels: IdxLabels) -> Iterator[Example]:
        # Solo etiquetas: las imagenes nunca pasan por la campana
        for index, label in enumerate(labels.labels.tolist()):
            yield Example(id=index, true_label=int(label))

    def relabel(
        self,
        labels: IdxLabels,
        out_dir: Union[str, Path],
        images: Optional[IdxImages] = None
    ) -> RelabelOutput:
        """
        Re-etiquetar y escribir IDX de etiquetas asignadas, procedencia y resumen.

        Raises:
            IdxFormatError: Si las imagenes no tienen la misma cantidad que las etiquetas
        """
        if images is not None and images.count != labels.count:
            raise IdxFormatError(
                "images",
                f"{images.count} imagenes no coinciden con {labels.count} etiquetas"
            )

        self.logger.info(
            "Re-etiquetando MNIST",
            examples=labels.count,
            w=self.w,
            policy=self.policy.spec(),
            s_max=self.s_max
        )
        result = run_campaign(
            self.oracle, self.policy, self.s_max, self.examples(labels), self.master_seed, threads=self.threads
        )
        summary = summarize(result)

        out = Path(out_dir)
        ordered = sorted(result.labeled, key=lambda e: e.example_id)
        labels_path = write_idx_labels(out / RELABELED_FILE, [e.assigned_label for e in ordered])
        provenance_path = write_examples_csv(out / PROVENANCE_FILE, result)
        summary_path = write_summary(out / SUMMARY_FILE, summary)

        if len(ordered) < labels.count:
            self.logger.warning(
                "Presupuesto agotado antes del final del dataset",
                labeled=len(ordered),
                total=labels.count
            )
        return RelabelOutput(
            result=result,
            summary=summary,
            labels_path=labels_path,
            provenance_path=provenance_path,
            summary_path=summary_path
        )


def relabel_campaign(
    labels: IdxLabels,
    w: float,
    policy: AnyPolicy,
    s_max: int,
    master_seed: int,
    out_dir: Union[str, Path],
    images: Optional[IdxImages] = None,
    threads: Optional[int] = None
) -> RelabelOutput:
    """Atajo funcional sobre MnistRelabeler"""
    return MnistRelabeler(w, policy, s_max, master_seed, threads=threads).relabel(labels, out_dir, images=images)
