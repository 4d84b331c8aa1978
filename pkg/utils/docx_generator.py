"""
DOCX 실험 보고서 생성기
- 표지: 데이터셋 / 프로토콜 요약
- 결과 표: 선형 / 비선형 그룹, "mean ± std", 열별 최고 평균 굵게
- 모델별 분할 상세, 선택된 하이퍼파라미터, 실패한 모델 목록
"""
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

from docx import Document
from docx.enum.text import WD_PARAGRAPH_ALIGNMENT
from docx.oxml import OxmlElement
from docx.oxml.ns import qn
from docx.shared import Pt, RGBColor

from evaluation.experiment import ExperimentResult
from evaluation.metrics import METRIC_NAMES
from utils.report_writer import TABLE_HEADERS, display_name, format_cell
from utils.serialization import atomic_save


class ExperimentReportGenerator:
    """단일 클래스 분류 실험 DOCX 보고서"""

    # 컬러 테마 (RGB 튜플)
    COLOR_TUPLES = {
        'primary': (0, 102, 204),
        'success': (46, 204, 113),
        'danger': (231, 76, 60),
        'gray': (149, 165, 166),
        'light': (236, 240, 241),
    }

    def __init__(self):
        self.COLORS = {key: RGBColor(*rgb) for key, rgb in self.COLOR_TUPLES.items()}

    def _rgb_tuple_to_hex(self, rgb_tuple: tuple) -> str:
        return f"{rgb_tuple[0]:02X}{rgb_tuple[1]:02X}{rgb_tuple[2]:02X}"

    def generate_report(
        self,
        results: Sequence[ExperimentResult],
        run_info: Dict[str, Any],
        output_path: str,
        failures: Optional[Dict[str, str]] = None
    ) -> str:
        """
        보고서 생성

        Args:
            results: 모델별 실험 결과
            run_info: 데이터셋 / 프로토콜 정보 (표지에 key: value 로 표시)
            output_path: 출력 경로
            failures: 실패한 모델 라벨 -> 오류 메시지
        """
        doc = Document()
        self._set_korean_font(doc)

        self._add_cover_page(doc, run_info)
        self._add_results_table(doc, results)
        self._add_split_details(doc, results)
        if failures:
            self._add_failures(doc, failures)

        atomic_save(output_path, doc.save)
        return output_path

    def _set_korean_font(self, doc: Document):
        style = doc.styles['Normal']
        style.font.name = '맑은 고딕'
        style.font.size = Pt(10)
        style.element.get_or_add_rPr().get_or_add_rFonts().set(qn('w:eastAsia'), '맑은 고딕')

    def _shade_cell(self, cell, color_key: str):
        """셀 배경색"""
        shading = OxmlElement('w:shd')
        shading.set(qn('w:fill'), self._rgb_tuple_to_hex(self.COLOR_TUPLES[color_key]))
        cell._tc.get_or_add_tcPr().append(shading)

    def _write_cell(self, cell, text: str, bold: bool = False, color: Optional[str] = None):
        cell.text = ""
        run = cell.paragraphs[0].add_run(text)
        run.font.bold = bold
        if color:
            run.font.color.rgb = self.COLORS[color]
        return run

    def _add_cover_page(self, doc: Document, run_info: Dict[str, Any]):
        title = doc.add_heading('단일 클래스 분류 실험 보고서', level=0)
        title.alignment = WD_PARAGRAPH_ALIGNMENT.CENTER
        for run in title.runs:
            run.font.color.rgb = self.COLORS['primary']

        subtitle = doc.add_paragraph()
        subtitle.alignment = WD_PARAGRAPH_ALIGNMENT.CENTER
        run = subtitle.add_run(datetime.now().strftime('%Y-%m-%d %H:%M'))
        run.font.color.rgb = self.COLORS['gray']
        run.italic = True

        table = doc.add_table(rows=len(run_info), cols=2)
        table.style = 'Light List Accent 1'
        for i, (key, value) in enumerate(run_info.items()):
            cells = table.rows[i].cells
            self._write_cell(cells[0], str(key), bold=True)
            self._write_cell(cells[1], str(value))
        doc.add_paragraph()

    def _best_means(self, results: Sequence[ExperimentResult]) -> Dict[str, float]:
        return {name: max(r.mean[name] for r in results) for name in METRIC_NAMES}

    def _add_results_table(self, doc: Document, results: Sequence[ExperimentResult]):
        heading = doc.add_heading('결과 요약 (mean ± std)', level=1)
        for run in heading.runs:
            run.font.color.rgb = self.COLORS['primary']
        if not results:
            doc.add_paragraph('완료된 모델이 없습니다.')
            return

        groups = [
            ('Linear OCC', [r for r in results if r.label.endswith('+linear')]),
            ('Non-linear OCC', [r for r in results if r.label.endswith('+rbf')]),
        ]
        best = self._best_means(results)

        table = doc.add_table(rows=1, cols=len(TABLE_HEADERS) + 1)
        table.style = 'Light Grid Accent 1'
        header_cells = table.rows[0].cells
        for cell, text in zip(header_cells, ['Model', *TABLE_HEADERS]):
            self._write_cell(cell, text, bold=True)

        for title, members in groups:
            if not members:
                continue
            row = table.add_row().cells
            self._write_cell(row[0], title, bold=True, color='primary')
            for cell in row:
                self._shade_cell(cell, 'light')
            for result in members:
                cells = table.add_row().cells
                self._write_cell(cells[0], display_name(result.label))
                for cell, name in zip(cells[1:], METRIC_NAMES):
                    # 열별 최고 평균 굵게
                    is_best = round(result.mean[name], 2) == round(best[name], 2)
                    self._write_cell(cell, format_cell(result.mean[name], result.std[name]), bold=is_best)
        doc.add_paragraph()

    def _add_split_details(self, doc: Document, results: Sequence[ExperimentResult]):
        doc.add_heading('모델별 분할 결과', level=1)
        for result in results:
            doc.add_heading(display_name(result.label) + f" ({result.label})", level=2)
            table = doc.add_table(rows=1, cols=len(METRIC_NAMES) + 2)
            table.style = 'Light List Accent 1'
            for cell, text in zip(table.rows[0].cells, ['Split', *TABLE_HEADERS, 'Params']):
                self._write_cell(cell, text, bold=True)
            for outcome in result.outcomes:
                cells = table.add_row().cells
                self._write_cell(cells[0], str(outcome.split))
                values = outcome.report.metric_values()
                for cell, name in zip(cells[1:], METRIC_NAMES):
                    self._write_cell(cell, f"{values[name]:.4f}")
                self._write_cell(cells[-1], self._format_params(outcome.params))
            doc.add_paragraph()

    def _format_params(self, params: Dict[str, Any]) -> str:
        return ", ".join(
            f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in sorted(params.items())
        )

    def _add_failures(self, doc: Document, failures: Dict[str, str]):
        heading = doc.add_heading('실패한 모델', level=1)
        for run in heading.runs:
            run.font.color.rgb = self.COLORS['danger']
        for label, message in failures.items():
            p = doc.add_paragraph(style='List Bullet')
            p.add_run(f"{label}: ").bold = True
            p.add_run(message)


__all__: List[str] = ["ExperimentReportGenerator"]
