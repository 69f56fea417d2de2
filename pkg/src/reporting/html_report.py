import os
from datetime import datetime

from jinja2 import Template

from src.utils.logger import reporting_logger

logger = reporting_logger


class HTMLReportGenerator:
    """HTML报告生成器，把各个校验套件的逐条结果汇总成一页"""

    def __init__(self):
        """初始化HTML报告生成器"""
        self.template = Template(self._load_template())

    def _load_template(self):
        """加载HTML模板

        Returns:
            str: HTML模板内容
        """
        template = """
<!DOCTYPE html>
<html lang="zh-CN">
<head>
    <meta charset="UTF-8">
    <title>Kauffmann 范畴校验报告</title>
    <style>
        body { margin: 0; font-family: "Noto Sans SC", sans-serif; color: #222; background: #fafafa; }
        main { max-width: 1100px; margin: 0 auto; padding: 24px; }
        header { border-bottom: 3px solid #37474f; margin-bottom: 24px; }
        header p { color: #607d8b; }
        section { margin-bottom: 32px; }
        h2 { font-size: 1.1em; }
        table { width: 100%; border-collapse: collapse; background: #fff; }
        th { background: #eceff1; }
        th, td { text-align: left; padding: 4px 8px; border: 1px solid #cfd8dc; font-family: monospace; }
        td.residual { word-break: break-all; }
        .ok { color: #2e7d32; }
        .fail { color: #c62828; font-weight: bold; }
    </style>
</head>
<body>
<main>
    <header>
        <h1>Kauffmann 范畴校验报告</h1>
        <p>生成时间: {{ generated_at }} · 参数环境: {{ environment }}</p>
    </header>
    {% for suite in suites %}
    <section>
        <h2>{{ suite.title }}（{{ suite.passed }}/{{ suite.rows|length }} 通过）</h2>
        <table>
            <tr><th>关系</th><th>参数</th><th>结果</th><th>残差</th></tr>
            {% for row in suite.rows %}
            <tr>
                <td>{{ row.relation }}</td>
                <td>{{ row.get('indices', row.get('buffer', '')) }}</td>
                <td class="{{ 'ok' if row.ok else 'fail' }}">{{ '通过' if row.ok else '失败' }}</td>
                <td class="residual">{{ row.residual }}</td>
            </tr>
            {% endfor %}
        </table>
    </section>
    {% endfor %}
</main>
</body>
</html>
        """
        return template

    def generate(self, suites, metadata, output_path):
        """生成HTML报告

        Args:
            suites: [(标题, 行列表), ...]
            metadata: 元数据（environment 等）
            output_path: 输出路径

        Returns:
            str: 生成的文件路径
        """
        logger.info(f"生成HTML报告：{output_path}")
        os.makedirs(os.path.dirname(output_path) or '.', exist_ok=True)

        context = {
            'generated_at': metadata.get('generated_at', datetime.now().strftime('%Y-%m-%d %H:%M:%S')),
            'environment': metadata.get('environment', ''),
            'suites': [
                {'title': title, 'rows': rows, 'passed': sum(1 for row in rows if row['ok'])}
                for title, rows in suites
            ],
        }
        html_content = self.template.render(**context)

        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(html_content)

        logger.info(f"HTML报告已保存：{output_path}")
        return output_path
