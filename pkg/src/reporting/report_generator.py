import os
import json
from datetime import datetime

from src.diagrams.serialization import morphism_to_dict
from src.reporting.html_report import HTMLReportGenerator
from src.utils.config import config
from src.utils.logger import reporting_logger

logger = reporting_logger


class ReportGenerator:
    """报告生成器，负责把计算结果写成 JSON / CSV / HTML 文件"""

    def __init__(self, output_dir=None, environment=''):
        """初始化报告生成器

        Args:
            output_dir: 输出目录，默认 config.OUTPUT_DIR
            environment: 参数环境的描述文本
        """
        self.output_dir = output_dir or config.OUTPUT_DIR
        self.html_report = HTMLReportGenerator()
        self.report_metadata = {
            'generated_at': datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
            'version': '1.0.0',
            'environment': environment,
        }

    def _path(self, filename):
        os.makedirs(self.output_dir, exist_ok=True)
        return os.path.join(self.output_dir, filename)

    def save_json(self, data, filename):
        """保存 JSON 文件

        Args:
            data: 可序列化的数据
            filename: 文件名

        Returns:
            str: 保存的文件路径
        """
        file_path = self._path(filename)
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, ensure_ascii=False, indent=2)
        logger.info(f"已保存 {file_path}")
        return file_path

    def save_morphism(self, f, filename='morphism.json'):
        return self.save_json(morphism_to_dict(f), filename)

    def save_verification(self, title, rows, filename):
        """保存校验报告（逐条关系）"""
        passed = sum(1 for row in rows if row['ok'])
        data = {
            'metadata': self.report_metadata,
            'title': title,
            'passed': passed,
            'total': len(rows),
            'rows': rows,
        }
        return self.save_json(data, filename)

    def save_structure_constants(self, basis, table, prefix='structure_constants'):
        """保存结构常数：CSV 长表与基的 JSON 清单

        Args:
            basis: BasisDiagram 列表
            table: pandas.DataFrame（row, col, target, coeff）
            prefix: 文件名前缀

        Returns:
            dict: {'csv': 路径, 'manifest': 路径}
        """
        csv_path = self._path(f"{prefix}.csv")
        table.to_csv(csv_path, index=False, encoding='utf-8')
        logger.info(f"已保存 {csv_path}（{len(table)} 行）")
        manifest = [
            {'index': k, 'connector': d.connector.to_list(), 'dots': {str(i): e for i, e in d.dots}}
            for k, d in enumerate(basis)
        ]
        manifest_path = self.save_json({'metadata': self.report_metadata, 'basis': manifest}, f"{prefix}_basis.json")
        return {'csv': csv_path, 'manifest': manifest_path}

    def save_matrix(self, matrix, filename='oracle_matrix.json'):
        """保存稀疏矩阵三元组"""
        data = {
            'rows': len(matrix.rows),
            'cols': len(matrix.cols),
            'entries': matrix.to_triplets(),
        }
        return self.save_json(data, filename)

    def generate_html_report(self, suites, filename='verification_report.html'):
        """生成HTML报告

        Args:
            suites: [(标题, 行列表), ...]
            filename: 文件名

        Returns:
            str: 生成的文件路径
        """
        logger.info("开始生成HTML报告")
        return self.html_report.generate(suites, self.report_metadata, self._path(filename))
