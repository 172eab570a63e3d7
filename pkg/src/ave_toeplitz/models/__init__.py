"""資料模型（各模組請直接匯入子模組）"""
